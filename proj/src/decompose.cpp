#include "mresp/decompose.hpp"

#include <cmath>
#include <stdexcept>

#include "mresp/numeric.hpp"

namespace mresp {

namespace {

struct DecomposeDayPartial {
    std::vector<double> full_num;
    std::vector<double> short_num;
    std::vector<double> long_num;
    double den = 0.0;
    std::int64_t cnt = 0;
};

DecomposeDayPartial accumulate_day(const MidpointSeries& mid,
                                   const SignSeries& sg,
                                   std::span<const std::int32_t> lags,
                                   std::int32_t tau_prime, bool exclude_zero,
                                   ReturnKind kind) {
    const auto n_lags = lags.size();
    const std::int32_t lag_max = lags.back();
    DecomposeDayPartial out;
    out.full_num.assign(n_lags, 0.0);
    out.short_num.assign(n_lags, 0.0);
    out.long_num.assign(n_lags, 0.0);
    if (mid.length() != sg.length())
        throw std::runtime_error("decompose: midpoint/sign length mismatch");

    std::vector<NeumaierSum> full(n_lags), part_short(n_lags), part_long(n_lags);
    const std::int32_t len = mid.length();

    auto ret = [&](std::int32_t from, std::int32_t to) {
        const double m0 = mid.m[static_cast<std::size_t>(from)];
        const double m1 = mid.m[static_cast<std::size_t>(to)];
        return kind == ReturnKind::relative ? (m1 - m0) / m0 : std::log(m1 / m0);
    };

    for (std::int32_t k = 0; k < len; ++k) {
        const auto eps = sg.eps_p[static_cast<std::size_t>(k)];
        if (exclude_zero && eps == 0) continue;
        const std::int32_t a = k - 1;
        if (a < mid.defined_from || a + lag_max >= len) continue;

        out.den += 1.0;
        out.cnt += 1;
        if (eps == 0) continue;
        const double c = static_cast<double>(eps);

        for (std::size_t li = 0; li < n_lags; ++li) {
            const std::int32_t tau = lags[li];
            const double r_full = ret(a, a + tau);
            full[li].add(r_full * c);
            if (tau > tau_prime) {
                part_short[li].add(ret(a, a + tau_prime) * c);
                part_long[li].add(ret(a + tau_prime, a + tau) * c);
            } else {
                part_short[li].add(r_full * c);
                part_long[li].add(r_full * c);
            }
        }
    }

    for (std::size_t li = 0; li < n_lags; ++li) {
        out.full_num[li] = full[li].value();
        out.short_num[li] = part_short[li].value();
        out.long_num[li] = part_long[li].value();
    }
    return out;
}

ResponseCurve make_curve(std::span<const DecomposeDayPartial> partials,
                         const std::vector<double> DecomposeDayPartial::*num_field,
                         const std::vector<std::int32_t>& lags,
                         CurveKind kind, const CurveMeta& meta) {
    const auto n_lags = lags.size();
    ResponseCurve curve;
    curve.kind = kind;
    curve.lags = lags;
    curve.values.assign(n_lags, std::numeric_limits<double>::quiet_NaN());
    curve.counts.assign(n_lags, 0);
    curve.den.assign(n_lags, 0.0);
    curve.abs_weight.assign(n_lags, 0.0);
    curve.m2.assign(n_lags, 0.0);
    curve.stderrs.assign(n_lags, std::numeric_limits<double>::quiet_NaN());
    curve.meta = meta;

    double den = 0.0;
    std::int64_t cnt = 0;
    for (const auto& partial : partials) {
        den += partial.den;
        cnt += partial.cnt;
    }

    for (std::size_t li = 0; li < n_lags; ++li) {
        curve.counts[li] = cnt;
        curve.den[li] = den;
        curve.abs_weight[li] = den;
        if (cnt == 0 || den <= 0.0) continue;
        NeumaierSum num;
        for (const auto& partial : partials) num.add((partial.*num_field)[li]);
        const double value = num.value() / den;
        curve.values[li] = value;

        NeumaierSum m2;
        std::int64_t active_days = 0;
        for (const auto& partial : partials) {
            if (partial.den <= 0.0) continue;
            ++active_days;
            const double resid = (partial.*num_field)[li] - value * partial.den;
            m2.add(resid * resid);
        }
        curve.m2[li] = m2.value();
        if (active_days >= 2) {
            const double d = static_cast<double>(active_days);
            curve.stderrs[li] = std::sqrt(curve.m2[li] * d / (d - 1.0)) / den;
        }
    }
    return curve;
}

}  // namespace

LagDecomposition decompose_response(std::span<const MidpointSeries> returns_i,
                                    std::span<const SignSeries> signs_j,
                                    std::int32_t tau_prime,
                                    const EstimatorConfig& config) {
    if (tau_prime < 1 || tau_prime > config.tau_max)
        throw std::runtime_error("decompose: tau_prime outside [1, tau_max]");
    auto lags = config.lag_grid();
    const auto pairs = detail::align_days(returns_i, signs_j);

    std::vector<DecomposeDayPartial> partials(pairs.size());
    parallel_for(pairs.size(), config.workers, [&](std::size_t d) {
        partials[d] = accumulate_day(*pairs[d].mid, *pairs[d].signs, lags,
                                     tau_prime, config.exclude_zero_sign,
                                     config.return_kind);
    });

    CurveMeta meta;
    meta.first_day = pairs.front().mid->day;
    meta.last_day = pairs.back().mid->day;
    meta.n_days = static_cast<std::int32_t>(pairs.size());
    meta.return_kind = config.return_kind;
    meta.exclude_zero_sign = config.exclude_zero_sign;

    LagDecomposition out;
    out.tau_prime = tau_prime;
    out.short_curve = make_curve(partials, &DecomposeDayPartial::short_num,
                                 lags, CurveKind::short_lag, meta);
    out.long_curve = make_curve(partials, &DecomposeDayPartial::long_num, lags,
                                CurveKind::long_lag, meta);
    out.original = make_curve(partials, &DecomposeDayPartial::full_num, lags,
                              CurveKind::physical, meta);

    out.residual.assign(lags.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t li = 0; li < lags.size(); ++li) {
        if (lags[li] <= tau_prime || !out.original.has_value(li)) continue;
        out.residual[li] = std::fabs(out.short_curve.values[li] +
                                     out.long_curve.values[li] -
                                     out.original.values[li]);
    }
    return out;
}

ResponseCurve shuffled_sign_baseline(std::span<const MidpointSeries> returns_i,
                                     std::span<const SignSeries> signs_j,
                                     const EstimatorConfig& config,
                                     std::uint64_t seed) {
    std::vector<SignSeries> shuffled(signs_j.size());
    parallel_for(signs_j.size(), config.workers, [&](std::size_t d) {
        shuffled[d] = shuffle_signs(signs_j[d], seed);
    });
    auto curve = detail::accumulate_response(returns_i, shuffled,
                                             ResponseScale::physical, config,
                                             1, CurveKind::baseline);
    return curve;
}

}  // namespace mresp
