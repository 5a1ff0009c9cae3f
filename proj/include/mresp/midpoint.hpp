#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mresp/events.hpp"

namespace mresp {

enum class ReturnKind { relative, logarithmic };

// Per-day, per-second midpoint and spread over market time. For each second
// with quotes the last quote of that second is the representative value;
// quoteless seconds carry the previous second's value forward. Seconds
// before the first quote of the day are undefined (no back-fill) and every
// estimator skips them.
struct MidpointSeries {
    Date day;
    std::int32_t base_s = 0;      // window open, seconds since midnight
    std::vector<double> m;        // midpoint per second offset
    std::vector<double> s;        // spread per second offset
    std::int32_t defined_from = 0;

    std::int32_t length() const { return static_cast<std::int32_t>(m.size()); }
    bool defined(std::int32_t k) const {
        return k >= defined_from && k < length();
    }
};

// Thin view pairing a series with a return convention.
struct ReturnSeries {
    const MidpointSeries* series = nullptr;
    ReturnKind kind = ReturnKind::relative;
};

// Builds the per-second series from one day's window-filtered quotes,
// ordered by (t, seq). Throws std::runtime_error on an empty day.
MidpointSeries build_midpoint_series(std::span<const QuoteEvent> quotes_of_day,
                                     const MarketWindow& window);

// r(t, tau): relative (m(t+tau)-m(t))/m(t) or logarithmic ln(m(t+tau)/m(t)).
// nullopt when either endpoint is undefined or out of the day.
std::optional<double> compute_return(const MidpointSeries& series,
                                     std::int32_t t, std::int32_t tau,
                                     ReturnKind kind);

// Mean over quote-bearing seconds of |last mid - mean mid| / mean mid, the
// sampling-error proxy for the last-of-second convention. Lets users compare
// their feed against the sub-0.01% figure typical of liquid tick data.
double midpoint_sampling_diagnostic(std::span<const QuoteEvent> quotes_of_day);

}  // namespace mresp
