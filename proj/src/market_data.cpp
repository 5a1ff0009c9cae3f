#include "mresp/market_data.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "mresp/text.hpp"

namespace mresp {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

// Resolves required column names to field indexes; order in the file is
// free. nullopt flags a zero-byte stream: that is an empty dataset, not a
// broken header, and yields an empty event sequence.
std::optional<std::map<std::string, std::size_t>> read_header(
    std::istream& in, const FormatConfig& format,
    const std::vector<std::string>& required, const char* what) {
    std::string line;
    if (!std::getline(in, line)) return std::nullopt;
    std::vector<std::string_view> fields;
    split_fields(line, format.delimiter, fields);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < fields.size(); ++i)
        index.emplace(std::string(trim(fields[i])), i);
    for (const auto& name : required) {
        if (!index.count(name))
            throw std::runtime_error(std::string(what) +
                                     ": header missing column '" + name + "'");
    }
    return index;
}

// Time column accepts integer seconds since midnight or HH:MM:SS.
std::optional<std::int32_t> parse_time_field(std::string_view text) {
    if (auto s = parse_int64(text)) {
        if (*s < 0 || *s >= 86400) return std::nullopt;
        return static_cast<std::int32_t>(*s);
    }
    if (auto s = parse_time_of_day(text)) return static_cast<std::int32_t>(*s);
    return std::nullopt;
}

struct RowCursor {
    bool have_last = false;
    Date last_day{};
    std::int32_t last_t = 0;
    std::int32_t seq = 0;

    // Returns the seq for an event at (day, t), or nullopt when the row
    // travels back in time relative to the last accepted row.
    std::optional<std::int32_t> advance(const Date& day, std::int32_t t) {
        if (have_last) {
            if (day == last_day && t == last_t) return ++seq;
            if (day < last_day || (day == last_day && t < last_t))
                return std::nullopt;
        }
        have_last = true;
        last_day = day;
        last_t = t;
        seq = 0;
        return 0;
    }
};

}  // namespace

void ParseReport::reject(std::size_t line, std::string reason) {
    ++rejected;
    if (detail.size() < kMaxDetail) detail.push_back({line, std::move(reason)});
}

std::vector<QuoteEvent> parse_quotes(std::istream& in,
                                     const FormatConfig& format,
                                     ParseReport& report) {
    const auto header = read_header(
        in, format, {"day", "time", "bid", "ask", "bid_vol", "ask_vol"}, "quotes");
    if (!header) return {};
    const auto& col = *header;
    const std::size_t c_day = col.at("day"), c_time = col.at("time");
    const std::size_t c_bid = col.at("bid"), c_ask = col.at("ask");
    const std::size_t c_bv = col.at("bid_vol"), c_av = col.at("ask_vol");
    const std::size_t width = 1 + std::max({c_day, c_time, c_bid, c_ask, c_bv, c_av});

    std::vector<QuoteEvent> out;
    std::vector<std::string_view> fields;
    RowCursor cursor;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = trim(line);
        if (text.empty()) continue;
        split_fields(text, format.delimiter, fields);
        if (fields.size() < width) {
            report.reject(line_no, "too few fields");
            continue;
        }
        const auto day = Date::parse(trim(fields[c_day]));
        const auto t = parse_time_field(trim(fields[c_time]));
        const auto bid = parse_double(trim(fields[c_bid]));
        const auto ask = parse_double(trim(fields[c_ask]));
        const auto bv = parse_int64(trim(fields[c_bv]));
        const auto av = parse_int64(trim(fields[c_av]));
        if (!day || !t || !bid || !ask || !bv || !av) {
            report.reject(line_no, "unparseable field");
            continue;
        }
        if (!(*bid > 0.0) || *ask < *bid) {  // also catches NaN
            report.reject(line_no, "crossed or non-positive quote");
            continue;
        }
        if (*bv < 0 || *av < 0) {
            report.reject(line_no, "negative volume");
            continue;
        }
        const auto seq = cursor.advance(*day, *t);
        if (!seq) {
            report.reject(line_no, "out-of-order timestamp");
            continue;
        }
        out.push_back(QuoteEvent{*day, *t, *seq, *bid, *ask, *bv, *av});
        ++report.accepted;
    }
    return out;
}

std::vector<TradeEvent> parse_trades(std::istream& in,
                                     const FormatConfig& format,
                                     ParseReport& report) {
    const auto header =
        read_header(in, format, {"day", "time", "price", "volume"}, "trades");
    if (!header) return {};
    const auto& col = *header;
    const std::size_t c_day = col.at("day"), c_time = col.at("time");
    const std::size_t c_price = col.at("price"), c_vol = col.at("volume");
    const std::size_t width = 1 + std::max({c_day, c_time, c_price, c_vol});

    std::vector<TradeEvent> out;
    std::vector<std::string_view> fields;
    RowCursor cursor;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = trim(line);
        if (text.empty()) continue;
        split_fields(text, format.delimiter, fields);
        if (fields.size() < width) {
            report.reject(line_no, "too few fields");
            continue;
        }
        const auto day = Date::parse(trim(fields[c_day]));
        const auto t = parse_time_field(trim(fields[c_time]));
        const auto price = parse_double(trim(fields[c_price]));
        const auto volume = parse_int64(trim(fields[c_vol]));
        if (!day || !t || !price || !volume) {
            report.reject(line_no, "unparseable field");
            continue;
        }
        if (!(*price > 0.0) || *volume <= 0) {
            report.reject(line_no, "non-positive price or volume");
            continue;
        }
        const auto seq = cursor.advance(*day, *t);
        if (!seq) {
            report.reject(line_no, "out-of-order timestamp");
            continue;
        }
        out.push_back(TradeEvent{*day, *t, *seq, *price, *volume});
        ++report.accepted;
    }
    return out;
}

namespace {

template <typename Event>
std::vector<Event> filter_window(std::span<const Event> events,
                                 const MarketWindow& window) {
    std::vector<Event> kept;
    kept.reserve(events.size());
    for (const auto& e : events)
        if (window.contains(e.t)) kept.push_back(e);
    return kept;
}

}  // namespace

std::vector<QuoteEvent> filter_market_time(std::span<const QuoteEvent> events,
                                           const MarketWindow& window) {
    return filter_window(events, window);
}

std::vector<TradeEvent> filter_market_time(std::span<const TradeEvent> events,
                                           const MarketWindow& window) {
    return filter_window(events, window);
}

void write_quotes(std::ostream& out, std::span<const QuoteEvent> events) {
    out << "day,time,bid,ask,bid_vol,ask_vol\n";
    for (const auto& e : events) {
        out << e.day.iso() << ',' << e.t << ',' << format_double(e.bid) << ','
            << format_double(e.ask) << ',' << e.bid_vol << ',' << e.ask_vol
            << '\n';
    }
}

void write_trades(std::ostream& out, std::span<const TradeEvent> events) {
    out << "day,time,price,volume\n";
    for (const auto& e : events) {
        out << e.day.iso() << ',' << e.t << ',' << format_double(e.price) << ','
            << e.volume << '\n';
    }
}

}  // namespace mresp
