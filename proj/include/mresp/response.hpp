#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mresp/midpoint.hpp"
#include "mresp/trade_signs.hpp"

namespace mresp {

// Averaging scheme: which per-second weight multiplies the sign-return
// product. trade: every individual trade counts (weight N, contribution E);
// physical: one vote per trading second (sgn of the net flow); activity:
// the physical sign re-weighted by the number of trades in its second.
enum class ResponseScale { trade, physical, activity };

enum class CurveKind {
    trade_scale,
    physical,
    activity,
    shifted,
    short_lag,
    long_lag,
    baseline,
    group_average,
};

struct CurveMeta {
    std::string symbol_i;  // stock whose returns are measured
    std::string symbol_j;  // stock whose signs are used
    Date first_day{};
    Date last_day{};
    std::int32_t n_days = 0;
    ReturnKind return_kind = ReturnKind::relative;
    bool exclude_zero_sign = true;
    std::int32_t t_shift = 1;  // anchor offset; 1 is the baseline convention
};

// One estimated response curve. values[i] is NaN where no sample exists.
// m2 holds per-lag sums of squared day-level residuals (num_d - R*den_d)^2;
// stderrs derive from them with days as the clustering unit, because lag
// windows overlap heavily within a day and per-sample variances would
// pretend independence that is not there.
struct ResponseCurve {
    CurveKind kind = CurveKind::physical;
    std::vector<std::int32_t> lags;
    std::vector<double> values;
    std::vector<std::int64_t> counts;   // contributing seconds (or trades)
    std::vector<double> den;            // sum of denominator weights
    std::vector<double> abs_weight;     // sum of |numerator weight|
    std::vector<double> m2;
    std::vector<double> stderrs;
    CurveMeta meta;

    bool has_value(std::size_t i) const { return !std::isnan(values[i]); }
    // Sum of normalized weights at lag i (1 for physical/activity by
    // construction; <= 1 for trade scale, reaching 1 only if every second's
    // trades share one direction).
    double weight_sum(std::size_t i) const {
        return den[i] > 0.0 ? abs_weight[i] / den[i]
                            : std::numeric_limits<double>::quiet_NaN();
    }
};

struct EstimatorConfig {
    std::int32_t tau_max = 1000;
    std::vector<std::int32_t> lags;  // empty: every integer 1..tau_max
    bool exclude_zero_sign = true;   // drop seconds with eps_p = 0 (physical)
    ReturnKind return_kind = ReturnKind::relative;
    int workers = 1;

    // Resolved, validated lag grid (strictly increasing, within
    // [1, tau_max]). Throws std::runtime_error otherwise.
    std::vector<std::int32_t> lag_grid() const;
};

// Base estimators: the sign observed in second t is paired with the return
// anchored one second earlier, r(t-1, tau). Days present in only one of the
// two inputs are skipped whole; an empty overlap throws.
ResponseCurve response_trade_scale(std::span<const MidpointSeries> returns_i,
                                   std::span<const SignSeries> signs_j,
                                   const EstimatorConfig& config);
ResponseCurve response_physical(std::span<const MidpointSeries> returns_i,
                                std::span<const SignSeries> signs_j,
                                const EstimatorConfig& config);
ResponseCurve response_activity(std::span<const MidpointSeries> returns_i,
                                std::span<const SignSeries> signs_j,
                                const EstimatorConfig& config);

// Test oracle: the same estimators written as one literal loop per
// (lag, day, second) over compute_return, with no streaming tricks. Slow on
// purpose; intended for inputs up to ~1e5 seconds per day.
ResponseCurve brute_force_response(std::span<const MidpointSeries> returns_i,
                                   std::span<const SignSeries> signs_j,
                                   ResponseScale scale,
                                   const EstimatorConfig& config);

namespace detail {

// Day alignment by date (ascending); throws on empty overlap.
struct DayPair {
    const MidpointSeries* mid = nullptr;
    const SignSeries* signs = nullptr;
};
std::vector<DayPair> align_days(std::span<const MidpointSeries> mids,
                                std::span<const SignSeries> signs);

// Shared streaming kernel; t_shift generalizes the t-1 anchor.
ResponseCurve accumulate_response(std::span<const MidpointSeries> mids,
                                  std::span<const SignSeries> signs,
                                  ResponseScale scale,
                                  const EstimatorConfig& config,
                                  std::int32_t t_shift, CurveKind kind);

}  // namespace detail

}  // namespace mresp
