#include "mresp/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mresp/text.hpp"

namespace mresp {

namespace fs = std::filesystem;

void atomic_write_file(const fs::path& path, const std::string& content) {
    const fs::path dir = path.parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open for write: " + tmp.string());
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

fs::path day_file(const fs::path& root, const std::string& symbol,
                  const Date& day, const std::string& suffix) {
    return root / symbol / (day.iso() + suffix);
}

std::vector<std::string> list_symbols(const fs::path& root) {
    std::vector<std::string> out;
    if (!fs::exists(root)) return out;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) out.push_back(entry.path().filename().string());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Date> list_days(const fs::path& root, const std::string& symbol,
                            const std::string& suffix) {
    std::vector<Date> out;
    const fs::path dir = root / symbol;
    if (!fs::exists(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() <= suffix.size() ||
            name.substr(name.size() - suffix.size()) != suffix)
            continue;
        if (auto day = Date::parse(name.substr(0, name.size() - suffix.size())))
            out.push_back(*day);
    }
    std::sort(out.begin(), out.end());
    return out;
}

StockEvents load_stock_events(const fs::path& root, const std::string& symbol) {
    StockEvents out;
    out.symbol = symbol;
    out.days = list_days(root, symbol, ".quotes.csv");
    if (out.days.empty())
        throw std::runtime_error("no quote files for symbol " + symbol +
                                 " under " + root.string());
    const FormatConfig format;
    for (const auto& day : out.days) {
        ParseReport report;
        {
            std::ifstream in(day_file(root, symbol, day, ".quotes.csv"));
            out.quotes.push_back(parse_quotes(in, format, report));
        }
        const fs::path trades_path = day_file(root, symbol, day, ".trades.csv");
        if (fs::exists(trades_path)) {
            std::ifstream in(trades_path);
            out.trades.push_back(parse_trades(in, format, report));
        } else {
            out.trades.emplace_back();
        }
    }
    return out;
}

StockSeries build_stock_series(const StockEvents& events,
                               const MarketWindow& window,
                               bool carry_signs_across_days) {
    StockSeries out;
    out.symbol = events.symbol;
    std::optional<int> carry;
    for (std::size_t d = 0; d < events.days.size(); ++d) {
        const auto& quotes = events.quotes[d];
        if (quotes.empty()) {
            ++out.dropped_days;
            continue;
        }
        out.mids.push_back(build_midpoint_series(quotes, window));

        const auto& trades = events.trades[d];
        if (trades.empty()) {
            SignSeries quiet;
            quiet.day = events.days[d];
            quiet.base_s = window.open_s;
            quiet.n.assign(static_cast<std::size_t>(window.length()), 0);
            quiet.e.assign(static_cast<std::size_t>(window.length()), 0);
            quiet.eps_p.assign(static_cast<std::size_t>(window.length()), 0);
            out.signs.push_back(std::move(quiet));
            continue;
        }
        const auto classified = classify_trade_scale(
            trades, carry_signs_across_days ? carry : std::nullopt);
        if (carry_signs_across_days) {
            for (std::size_t i = classified.signs.size(); i-- > 0;) {
                if (classified.signs[i] != 0) {
                    carry = classified.signs[i];
                    break;
                }
            }
        }
        out.signs.push_back(aggregate_physical(trades, classified, window));
        out.unresolved_trades += classified.unresolved;
    }
    if (out.mids.empty())
        throw std::runtime_error("build_stock_series: no usable days for " +
                                 events.symbol);
    return out;
}

std::string midpoint_to_csv(const MidpointSeries& series) {
    std::ostringstream out;
    out << "# day=" << series.day.iso() << " base_s=" << series.base_s
        << " len=" << series.length() << " defined_from=" << series.defined_from
        << '\n';
    out << "offset,midpoint,spread\n";
    for (std::int32_t k = series.defined_from; k < series.length(); ++k) {
        out << k << ',' << format_double(series.m[static_cast<std::size_t>(k)])
            << ',' << format_double(series.s[static_cast<std::size_t>(k)])
            << '\n';
    }
    return std::move(out).str();
}

std::string signs_to_csv(const SignSeries& series) {
    std::ostringstream out;
    out << "# day=" << series.day.iso() << " base_s=" << series.base_s
        << " len=" << series.length() << " unresolved=" << series.unresolved
        << '\n';
    out << "offset,n,e,eps\n";
    for (std::int32_t k = 0; k < series.length(); ++k) {
        const auto ku = static_cast<std::size_t>(k);
        if (series.n[ku] == 0) continue;
        out << k << ',' << series.n[ku] << ',' << series.e[ku] << ','
            << static_cast<int>(series.eps_p[ku]) << '\n';
    }
    return std::move(out).str();
}

std::string trade_signs_to_csv(const SignSeries& series) {
    std::ostringstream out;
    out << "# day=" << series.day.iso() << " base_s=" << series.base_s
        << " trades=" << series.trade_sec.size() << '\n';
    out << "offset,sign\n";
    for (std::size_t i = 0; i < series.trade_sec.size(); ++i)
        out << series.trade_sec[i] << ','
            << static_cast<int>(series.trade_sign[i]) << '\n';
    return std::move(out).str();
}

const char* curve_kind_name(CurveKind kind) {
    switch (kind) {
        case CurveKind::trade_scale: return "trade_scale";
        case CurveKind::physical: return "physical";
        case CurveKind::activity: return "activity";
        case CurveKind::shifted: return "shifted";
        case CurveKind::short_lag: return "short";
        case CurveKind::long_lag: return "long";
        case CurveKind::baseline: return "baseline";
        case CurveKind::group_average: return "group_average";
    }
    return "unknown";
}

const char* return_kind_name(ReturnKind kind) {
    return kind == ReturnKind::relative ? "relative" : "logarithmic";
}

std::string curve_to_csv(const ResponseCurve& curve) {
    std::ostringstream out;
    out << "# kind=" << curve_kind_name(curve.kind)
        << " i=" << (curve.meta.symbol_i.empty() ? "-" : curve.meta.symbol_i)
        << " j=" << (curve.meta.symbol_j.empty() ? "-" : curve.meta.symbol_j)
        << " days=" << curve.meta.n_days
        << " returns=" << return_kind_name(curve.meta.return_kind)
        << " exclude_zero=" << (curve.meta.exclude_zero_sign ? 1 : 0)
        << " t_shift=" << curve.meta.t_shift << '\n';
    out << "tau,value,count,stderr\n";
    for (std::size_t i = 0; i < curve.lags.size(); ++i) {
        out << curve.lags[i] << ',' << format_double(curve.values[i]) << ','
            << curve.counts[i] << ',' << format_double(curve.stderrs[i])
            << '\n';
    }
    return std::move(out).str();
}

std::string curve_to_json(const ResponseCurve& curve) {
    nlohmann::json j;
    j["kind"] = curve_kind_name(curve.kind);
    j["meta"] = {
        {"symbol_i", curve.meta.symbol_i},
        {"symbol_j", curve.meta.symbol_j},
        {"first_day", curve.meta.first_day.iso()},
        {"last_day", curve.meta.last_day.iso()},
        {"n_days", curve.meta.n_days},
        {"return_kind", return_kind_name(curve.meta.return_kind)},
        {"exclude_zero_sign", curve.meta.exclude_zero_sign},
        {"t_shift", curve.meta.t_shift},
    };
    j["lags"] = curve.lags;
    auto numbers_or_null = [](const std::vector<double>& xs) {
        nlohmann::json arr = nlohmann::json::array();
        for (const double x : xs) {
            if (std::isnan(x))
                arr.push_back(nullptr);
            else
                arr.push_back(x);
        }
        return arr;
    };
    j["values"] = numbers_or_null(curve.values);
    j["counts"] = curve.counts;
    j["stderr"] = numbers_or_null(curve.stderrs);
    j["den"] = curve.den;
    j["abs_weight"] = curve.abs_weight;
    j["m2"] = curve.m2;
    return j.dump(2) + "\n";
}

}  // namespace mresp
