#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mresp/events.hpp"

namespace mresp {

// Input framing. Files are delimiter-separated text with a header line that
// names the columns; column order is free.
struct FormatConfig {
    char delimiter = ',';
};

struct RejectedRow {
    std::size_t line = 0;  // 1-based line number in the input
    std::string reason;
};

// Audit trail for one parse. Dirty rows never abort a run: research files
// are messy and a partial result with a reject report beats no result.
struct ParseReport {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::vector<RejectedRow> detail;  // capped at kMaxDetail rows

    static constexpr std::size_t kMaxDetail = 64;

    void reject(std::size_t line, std::string reason);
};

// Parse a quote file. Header must name day, time, bid, ask, bid_vol,
// ask_vol. `seq` is assigned by arrival order within each (day, t).
// Throws std::runtime_error on an unreadable or incomplete header.
std::vector<QuoteEvent> parse_quotes(std::istream& in,
                                     const FormatConfig& format,
                                     ParseReport& report);

// Parse a trade file. Header must name day, time, price, volume.
std::vector<TradeEvent> parse_trades(std::istream& in,
                                     const FormatConfig& format,
                                     ParseReport& report);

// Keep only events inside the window; relative order is preserved.
std::vector<QuoteEvent> filter_market_time(std::span<const QuoteEvent> events,
                                           const MarketWindow& window);
std::vector<TradeEvent> filter_market_time(std::span<const TradeEvent> events,
                                           const MarketWindow& window);

// Canonical serialization (exact decimal text). parse(write(x)) == x.
void write_quotes(std::ostream& out, std::span<const QuoteEvent> events);
void write_trades(std::ostream& out, std::span<const TradeEvent> events);

// Splits a (day, t, seq)-ordered stream into per-day runs.
template <typename Event>
std::vector<std::span<const Event>> split_by_day(std::span<const Event> events) {
    std::vector<std::span<const Event>> days;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= events.size(); ++i) {
        if (i == events.size() || !(events[i].day == events[start].day)) {
            days.push_back(events.subspan(start, i - start));
            start = i;
        }
    }
    return days;
}

}  // namespace mresp
