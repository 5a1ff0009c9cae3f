#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mresp/response.hpp"

namespace mresp {

// Mean spread over every defined second of every given day, equal weight
// per second. Throws if no second is defined.
double average_spread(std::span<const MidpointSeries> days);

struct SpreadAssignment {
    std::string symbol;
    double avg_spread = 0.0;
    std::int32_t group = 0;  // 1-based band; 0 when out_of_range
    bool out_of_range = false;
};

// Band edges e1 < e2 < ... partition spreads into band 1 [0, e1), band 2
// [e1, e2), ..., closing at the last edge inclusive; anything above the last
// edge is flagged out-of-range rather than silently folded into the top
// band. Comparisons use a 1e-9 absolute epsilon: band boundaries and
// average spreads are typically two-decimal dollar figures, and a stock
// sitting exactly on an edge must land deterministically.
struct SpreadGrouping {
    std::vector<double> edges;
    std::vector<SpreadAssignment> assignments;

    static constexpr double kEpsilon = 1e-9;

    std::int32_t bands() const { return static_cast<std::int32_t>(edges.size()); }
};

// Default edges: 0.05, 0.10, 0.40 dollars (narrow / medium / wide).
std::vector<double> default_spread_edges();

SpreadGrouping assign_groups(
    const std::vector<std::pair<std::string, double>>& spread_table,
    std::span<const double> edges);

// Unweighted per-lag mean of the member stocks' curves for each band;
// absent (nullopt) for empty bands. All curves must share one lag grid.
// Result index b-1 holds band b. stderrs are cross-sectional (stock
// scatter), counts the number of stocks contributing per lag.
std::vector<std::optional<ResponseCurve>> group_average_response(
    const std::vector<std::pair<std::string, const ResponseCurve*>>& curves,
    const SpreadGrouping& grouping);

}  // namespace mresp
