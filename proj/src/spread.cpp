#include "mresp/spread.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "mresp/numeric.hpp"

namespace mresp {

double average_spread(std::span<const MidpointSeries> days) {
    NeumaierSum total;
    std::int64_t seconds = 0;
    for (const auto& day : days) {
        for (std::int32_t k = day.defined_from; k < day.length(); ++k)
            total.add(day.s[static_cast<std::size_t>(k)]);
        if (day.length() > day.defined_from)
            seconds += day.length() - day.defined_from;
    }
    if (seconds == 0)
        throw std::runtime_error("average_spread: no defined seconds");
    return total.value() / static_cast<double>(seconds);
}

std::vector<double> default_spread_edges() { return {0.05, 0.10, 0.40}; }

SpreadGrouping assign_groups(
    const std::vector<std::pair<std::string, double>>& spread_table,
    std::span<const double> edges) {
    if (edges.empty()) throw std::runtime_error("assign_groups: no edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (!(edges[i] > 0.0))
            throw std::runtime_error("assign_groups: edges must be positive");
        if (i > 0 && !(edges[i] > edges[i - 1]))
            throw std::runtime_error("assign_groups: edges must be strictly increasing");
    }

    SpreadGrouping out;
    out.edges.assign(edges.begin(), edges.end());
    out.assignments.reserve(spread_table.size());
    for (const auto& [symbol, spread] : spread_table) {
        SpreadAssignment a;
        a.symbol = symbol;
        a.avg_spread = spread;
        if (spread > edges.back() + SpreadGrouping::kEpsilon) {
            a.out_of_range = true;
        } else {
            std::int32_t group = 1;
            for (std::size_t i = 0; i + 1 < edges.size(); ++i)
                if (spread >= edges[i] - SpreadGrouping::kEpsilon)
                    group = static_cast<std::int32_t>(i) + 2;
            a.group = group;
        }
        out.assignments.push_back(std::move(a));
    }
    return out;
}

std::vector<std::optional<ResponseCurve>> group_average_response(
    const std::vector<std::pair<std::string, const ResponseCurve*>>& curves,
    const SpreadGrouping& grouping) {
    std::map<std::string, std::int32_t> group_of;
    for (const auto& a : grouping.assignments)
        if (!a.out_of_range) group_of[a.symbol] = a.group;

    const ResponseCurve* reference = nullptr;
    std::vector<std::vector<const ResponseCurve*>> members(
        static_cast<std::size_t>(grouping.bands()));
    for (const auto& [symbol, curve] : curves) {
        if (curve == nullptr)
            throw std::runtime_error("group_average_response: null curve");
        if (!reference) {
            reference = curve;
        } else if (curve->lags != reference->lags) {
            throw std::runtime_error("group_average_response: lag grids differ");
        }
        auto it = group_of.find(symbol);
        if (it == group_of.end()) continue;  // unassigned or out-of-range
        members[static_cast<std::size_t>(it->second - 1)].push_back(curve);
    }

    std::vector<std::optional<ResponseCurve>> out(
        static_cast<std::size_t>(grouping.bands()));
    for (std::size_t b = 0; b < members.size(); ++b) {
        if (members[b].empty()) continue;
        const auto n_lags = reference->lags.size();
        ResponseCurve avg;
        avg.kind = CurveKind::group_average;
        avg.lags = reference->lags;
        avg.values.assign(n_lags, std::numeric_limits<double>::quiet_NaN());
        avg.counts.assign(n_lags, 0);
        avg.den.assign(n_lags, 0.0);
        avg.abs_weight.assign(n_lags, 0.0);
        avg.m2.assign(n_lags, 0.0);
        avg.stderrs.assign(n_lags, std::numeric_limits<double>::quiet_NaN());
        avg.meta.symbol_i = "band-" + std::to_string(b + 1);
        avg.meta.symbol_j = avg.meta.symbol_i;

        for (std::size_t li = 0; li < n_lags; ++li) {
            NeumaierSum sum;
            std::int64_t n = 0;
            for (const auto* curve : members[b]) {
                if (!curve->has_value(li)) continue;
                sum.add(curve->values[li]);
                ++n;
            }
            avg.counts[li] = n;
            avg.den[li] = static_cast<double>(n);
            avg.abs_weight[li] = static_cast<double>(n);
            if (n == 0) continue;
            const double mean = sum.value() / static_cast<double>(n);
            avg.values[li] = mean;
            NeumaierSum m2;
            for (const auto* curve : members[b]) {
                if (!curve->has_value(li)) continue;
                const double d = curve->values[li] - mean;
                m2.add(d * d);
            }
            avg.m2[li] = m2.value();
            if (n >= 2)
                avg.stderrs[li] = std::sqrt(
                    avg.m2[li] / (static_cast<double>(n) * (static_cast<double>(n) - 1.0)));
        }
        out[b] = std::move(avg);
    }
    return out;
}

}  // namespace mresp
