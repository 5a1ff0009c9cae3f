#include "mresp/midpoint.hpp"

#include <cmath>
#include <stdexcept>

namespace mresp {

MidpointSeries build_midpoint_series(std::span<const QuoteEvent> quotes_of_day,
                                     const MarketWindow& window) {
    if (quotes_of_day.empty())
        throw std::runtime_error("build_midpoint_series: empty day");
    if (!window.valid())
        throw std::runtime_error("build_midpoint_series: invalid window");

    const std::int32_t len = window.length();
    MidpointSeries out;
    out.day = quotes_of_day.front().day;
    out.base_s = window.open_s;
    out.m.assign(static_cast<std::size_t>(len), 0.0);
    out.s.assign(static_cast<std::size_t>(len), 0.0);

    // Quotes are (t, seq)-ordered, so writing each quote into its slot
    // leaves the last quote of every second in place.
    std::int32_t first = -1;
    for (const auto& q : quotes_of_day) {
        if (!(q.day == out.day))
            throw std::runtime_error("build_midpoint_series: mixed days");
        if (!window.contains(q.t))
            throw std::runtime_error("build_midpoint_series: quote outside window");
        const std::int32_t k = q.t - window.open_s;
        out.m[static_cast<std::size_t>(k)] = 0.5 * (q.ask + q.bid);
        out.s[static_cast<std::size_t>(k)] = q.ask - q.bid;
        if (first < 0 || k < first) first = k;
    }

    out.defined_from = first;
    for (std::int32_t k = first + 1; k < len; ++k) {
        if (out.m[static_cast<std::size_t>(k)] == 0.0) {  // no quote this second
            out.m[static_cast<std::size_t>(k)] = out.m[static_cast<std::size_t>(k - 1)];
            out.s[static_cast<std::size_t>(k)] = out.s[static_cast<std::size_t>(k - 1)];
        }
    }
    return out;
}

std::optional<double> compute_return(const MidpointSeries& series,
                                     std::int32_t t, std::int32_t tau,
                                     ReturnKind kind) {
    if (tau < 1) return std::nullopt;
    if (!series.defined(t) || !series.defined(t + tau)) return std::nullopt;
    const double m0 = series.m[static_cast<std::size_t>(t)];
    const double m1 = series.m[static_cast<std::size_t>(t + tau)];
    if (kind == ReturnKind::relative) return (m1 - m0) / m0;
    return std::log(m1 / m0);
}

double midpoint_sampling_diagnostic(std::span<const QuoteEvent> quotes_of_day) {
    if (quotes_of_day.empty())
        throw std::runtime_error("midpoint_sampling_diagnostic: empty day");

    double total = 0.0;
    std::int64_t seconds = 0;
    std::size_t i = 0;
    while (i < quotes_of_day.size()) {
        std::size_t j = i;
        double sum = 0.0;
        double last = 0.0;
        while (j < quotes_of_day.size() &&
               quotes_of_day[j].day == quotes_of_day[i].day &&
               quotes_of_day[j].t == quotes_of_day[i].t) {
            last = 0.5 * (quotes_of_day[j].ask + quotes_of_day[j].bid);
            sum += last;
            ++j;
        }
        const double mean = sum / static_cast<double>(j - i);
        total += std::fabs(last - mean) / mean;
        ++seconds;
        i = j;
    }
    return total / static_cast<double>(seconds);
}

}  // namespace mresp
