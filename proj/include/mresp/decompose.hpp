#pragma once

#include "mresp/response.hpp"

namespace mresp {

// Split of the physical-scale response at pivot tau_prime. For tau >
// tau_prime the lag-tau return is cut at the pivot: the short curve holds
// the immediate part (anchor to anchor+tau_prime, the same number for every
// tau) and the long curve the late part (anchor+tau_prime to anchor+tau).
// At or below the pivot both curves simply repeat the original response.
//
// All three curves are computed over one fixed sample set — the anchors
// valid at the largest requested lag — so that short + long and the
// original are averages of the same samples and the log-return identity
// survives aggregation. (The original therefore uses slightly fewer samples
// at small tau than response_physical would.)
struct LagDecomposition {
    ResponseCurve short_curve;
    ResponseCurve long_curve;
    ResponseCurve original;
    // |short + long - original| per lag for tau > tau_prime, NaN elsewhere.
    // ~1e-15 for logarithmic returns (exact identity up to rounding); for
    // relative returns this reports the linearization residual, bounded by
    // the squared return magnitude.
    std::vector<double> residual;
    std::int32_t tau_prime = 0;
};

// config.return_kind selects the return convention; logarithmic is the one
// with the exact split and what the CLI defaults to for this analysis.
// Requires 1 <= tau_prime <= tau_max.
LagDecomposition decompose_response(std::span<const MidpointSeries> returns_i,
                                    std::span<const SignSeries> signs_j,
                                    std::int32_t tau_prime,
                                    const EstimatorConfig& config);

// Null reference: the physical-scale response recomputed after permuting
// each day's per-second signs among that day's trading seconds (seeded,
// deterministic per seed). Expectation zero at every lag.
ResponseCurve shuffled_sign_baseline(std::span<const MidpointSeries> returns_i,
                                     std::span<const SignSeries> signs_j,
                                     const EstimatorConfig& config,
                                     std::uint64_t seed);

}  // namespace mresp
