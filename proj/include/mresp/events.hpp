#pragma once

#include <cstdint>

#include "mresp/dates.hpp"

namespace mresp {

// One best-quote update. `t` is seconds since midnight on `day`; `seq`
// orders events sharing a second (feeds deliver many updates per second,
// timestamps are second-accurate only).
struct QuoteEvent {
    Date day;
    std::int32_t t = 0;
    std::int32_t seq = 0;
    double bid = 0.0;
    double ask = 0.0;
    std::int64_t bid_vol = 0;
    std::int64_t ask_vol = 0;

    bool operator==(const QuoteEvent&) const = default;
};

// One executed trade.
struct TradeEvent {
    Date day;
    std::int32_t t = 0;
    std::int32_t seq = 0;
    double price = 0.0;
    std::int64_t volume = 0;

    bool operator==(const TradeEvent&) const = default;
};

// Intraday analysis window, half-open [open_s, close_s) in seconds since
// midnight. The default trims the first and last ten minutes of the regular
// US session, keeping auction artifacts out of every downstream estimate
// and making each day exactly 22,200 seconds long.
struct MarketWindow {
    std::int32_t open_s = 9 * 3600 + 40 * 60;    // 09:40:00
    std::int32_t close_s = 15 * 3600 + 50 * 60;  // 15:50:00

    bool contains(std::int32_t t) const { return t >= open_s && t < close_s; }
    std::int32_t length() const { return close_s - open_s; }
    bool valid() const { return open_s >= 0 && close_s > open_s; }
};

}  // namespace mresp
