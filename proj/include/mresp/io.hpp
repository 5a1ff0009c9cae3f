#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mresp/market_data.hpp"
#include "mresp/midpoint.hpp"
#include "mresp/response.hpp"
#include "mresp/trade_signs.hpp"

namespace mresp {

// All writes land via a temp file in the target directory plus rename, so a
// reader never observes a half-written file and reruns replace outputs
// atomically. Creates parent directories as needed.
void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content);

std::string read_file(const std::filesystem::path& path);

// Dataset layout under a root directory:
//   <root>/<SYMBOL>/<YYYY-MM-DD>.quotes.csv     (canonical event schema)
//   <root>/<SYMBOL>/<YYYY-MM-DD>.trades.csv
// plus derived exports (.mid.csv, .signs.csv, .trade_signs.csv) and a
// dataset.json manifest written by the producing command.
std::filesystem::path day_file(const std::filesystem::path& root,
                               const std::string& symbol, const Date& day,
                               const std::string& suffix);

std::vector<std::string> list_symbols(const std::filesystem::path& root);
std::vector<Date> list_days(const std::filesystem::path& root,
                            const std::string& symbol,
                            const std::string& suffix);

// One stock's raw events, split per day (ascending).
struct StockEvents {
    std::string symbol;
    std::vector<Date> days;
    std::vector<std::vector<QuoteEvent>> quotes;  // parallel to days
    std::vector<std::vector<TradeEvent>> trades;  // parallel to days
};

StockEvents load_stock_events(const std::filesystem::path& root,
                              const std::string& symbol);

// Derived per-day series for one stock. Days with no quotes are dropped
// (and counted); a day with quotes but no trades yields an all-quiet sign
// series so physical include-zero estimators still see its seconds.
struct StockSeries {
    std::string symbol;
    std::vector<MidpointSeries> mids;
    std::vector<SignSeries> signs;
    std::int64_t unresolved_trades = 0;
    std::int64_t dropped_days = 0;
};

StockSeries build_stock_series(const StockEvents& events,
                               const MarketWindow& window,
                               bool carry_signs_across_days);

// Columnar text exports. Each starts with one "# key=value ..." meta line.
std::string midpoint_to_csv(const MidpointSeries& series);
std::string signs_to_csv(const SignSeries& series);        // per-second rows
std::string trade_signs_to_csv(const SignSeries& series);  // per-trade rows

// Curve table with the pinned header tau,value,count,stderr; absent values
// serialize as "nan". The JSON form carries the full curve (weights, m2,
// meta) for programmatic consumers.
std::string curve_to_csv(const ResponseCurve& curve);
std::string curve_to_json(const ResponseCurve& curve);

const char* curve_kind_name(CurveKind kind);
const char* return_kind_name(ReturnKind kind);

}  // namespace mresp
