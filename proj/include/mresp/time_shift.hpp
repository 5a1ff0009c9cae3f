#pragma once

#include "mresp/response.hpp"

namespace mresp {

// Scale on which the anchor offset t_s is expressed. physical: seconds, the
// return anchor moves to t - t_s. trade: trade counts, using per-trade
// pseudo-midpoints (each trade carries the midpoint standing at the end of
// the second before its own), and both t_s and the lags count trades.
enum class ShiftScale { physical, trade };

// Generalized estimator with the alignment offset as a parameter; t_s = 1 on
// the physical scale is exactly the base convention. Negative t_s anchors
// the return after the sign. Out-of-day anchors drop their samples, so an
// oversized |t_s| yields an empty (all-absent) curve rather than an error.
ResponseCurve response_with_shift(std::span<const MidpointSeries> returns_i,
                                  std::span<const SignSeries> signs_j,
                                  std::int32_t t_s, ShiftScale scale,
                                  const EstimatorConfig& config);

struct ShiftScanConfig {
    enum class Mode { fixed_tau_vary_shift, fixed_shift_vary_tau };
    Mode mode = Mode::fixed_tau_vary_shift;
    std::int32_t fixed_value = 1;        // tau, or t_s, per mode
    std::vector<std::int32_t> grid;      // the varied parameter
    ShiftScale scale = ShiftScale::physical;
    EstimatorConfig est;
};

// One curve per grid point. In fixed_tau mode each curve has the single lag
// tau evaluated at one shift; in fixed_shift mode each curve has one grid
// lag at the fixed shift. Grids must be non-empty; shift grids may span
// negative values, lag grids must be strictly increasing in [1, tau_max].
struct ShiftScan {
    ShiftScanConfig config;
    std::vector<ResponseCurve> curves;
};

ShiftScan run_shift_scan(std::span<const MidpointSeries> returns_i,
                         std::span<const SignSeries> signs_j,
                         const ShiftScanConfig& config);

}  // namespace mresp
