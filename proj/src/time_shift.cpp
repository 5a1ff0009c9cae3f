#include "mresp/time_shift.hpp"

#include <algorithm>
#include <stdexcept>

#include "mresp/numeric.hpp"

namespace mresp {

namespace {

// Per-day trade-time kernel. Trade n carries sign trade_sign[n] and the
// pseudo-midpoint M[n] = m[trade_sec[n] - 1] (midpoint standing before its
// second, matching the one-second alignment of the base estimator). The
// sign at trade n pairs with the pseudo-midpoint return from trade n - t_s
// over tau trades. Each trade weighs 1.
struct TradeShiftPartial {
    std::vector<double> num;
    std::vector<double> den;
    std::vector<std::int64_t> cnt;
    std::vector<double> absw;
};

TradeShiftPartial accumulate_day_trade_shift(
    const MidpointSeries& mid, const SignSeries& sg, std::int32_t t_s,
    ReturnKind kind, std::span<const std::int32_t> lags) {
    const auto n_lags = lags.size();
    TradeShiftPartial out;
    out.num.assign(n_lags, 0.0);
    out.den.assign(n_lags, 0.0);
    out.cnt.assign(n_lags, 0);
    out.absw.assign(n_lags, 0.0);

    const auto n_trades = static_cast<std::int32_t>(sg.trade_sec.size());
    std::vector<NeumaierSum> num(n_lags);
    std::vector<double> den_bucket(n_lags, 0.0);

    for (std::int32_t n = 0; n < n_trades; ++n) {
        const std::int32_t a = n - t_s;
        if (a < 0 || a >= n_trades) continue;
        const std::int32_t sec_a = sg.trade_sec[static_cast<std::size_t>(a)] - 1;
        if (sec_a < mid.defined_from) continue;
        const std::int32_t max_tau = n_trades - 1 - a;
        if (max_tau < 1 || max_tau < lags.front()) continue;
        const auto valid =
            static_cast<std::size_t>(std::upper_bound(lags.begin(), lags.end(),
                                                      max_tau) -
                                     lags.begin());
        den_bucket[valid - 1] += 1.0;

        const double m0 = mid.m[static_cast<std::size_t>(sec_a)];
        const double c = static_cast<double>(sg.trade_sign[static_cast<std::size_t>(n)]);
        for (std::size_t li = 0; li < valid; ++li) {
            const std::int32_t sec_b =
                sg.trade_sec[static_cast<std::size_t>(a + lags[li])] - 1;
            const double m1 = mid.m[static_cast<std::size_t>(sec_b)];
            const double r = kind == ReturnKind::relative ? (m1 - m0) / m0
                                                          : std::log(m1 / m0);
            num[li].add(r * c);
        }
    }

    double den_tail = 0.0;
    for (std::size_t li = n_lags; li-- > 0;) {
        den_tail += den_bucket[li];
        out.den[li] = den_tail;
        out.cnt[li] = static_cast<std::int64_t>(den_tail);
        out.absw[li] = den_tail;
        out.num[li] = num[li].value();
    }
    return out;
}

ResponseCurve trade_shift_response(std::span<const MidpointSeries> mids,
                                   std::span<const SignSeries> signs,
                                   std::int32_t t_s,
                                   const EstimatorConfig& config) {
    auto lags = config.lag_grid();
    const auto pairs = detail::align_days(mids, signs);

    std::vector<TradeShiftPartial> partials(pairs.size());
    parallel_for(pairs.size(), config.workers, [&](std::size_t d) {
        partials[d] = accumulate_day_trade_shift(*pairs[d].mid, *pairs[d].signs,
                                                 t_s, config.return_kind, lags);
    });

    const auto n_lags = lags.size();
    ResponseCurve curve;
    curve.kind = CurveKind::shifted;
    curve.lags = std::move(lags);
    curve.values.assign(n_lags, std::numeric_limits<double>::quiet_NaN());
    curve.counts.assign(n_lags, 0);
    curve.den.assign(n_lags, 0.0);
    curve.abs_weight.assign(n_lags, 0.0);
    curve.m2.assign(n_lags, 0.0);
    curve.stderrs.assign(n_lags, std::numeric_limits<double>::quiet_NaN());
    curve.meta.first_day = pairs.front().mid->day;
    curve.meta.last_day = pairs.back().mid->day;
    curve.meta.n_days = static_cast<std::int32_t>(pairs.size());
    curve.meta.return_kind = config.return_kind;
    curve.meta.exclude_zero_sign = config.exclude_zero_sign;
    curve.meta.t_shift = t_s;

    for (std::size_t li = 0; li < n_lags; ++li) {
        NeumaierSum num;
        double den = 0.0;
        std::int64_t cnt = 0;
        for (const auto& partial : partials) {
            num.add(partial.num[li]);
            den += partial.den[li];
            cnt += partial.cnt[li];
        }
        curve.counts[li] = cnt;
        curve.den[li] = den;
        curve.abs_weight[li] = den;
        if (cnt == 0 || den <= 0.0) continue;
        const double value = num.value() / den;
        curve.values[li] = value;

        NeumaierSum m2;
        std::int64_t active_days = 0;
        for (const auto& partial : partials) {
            if (partial.den[li] <= 0.0) continue;
            ++active_days;
            const double resid = partial.num[li] - value * partial.den[li];
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

ResponseCurve response_with_shift(std::span<const MidpointSeries> returns_i,
                                  std::span<const SignSeries> signs_j,
                                  std::int32_t t_s, ShiftScale scale,
                                  const EstimatorConfig& config) {
    if (scale == ShiftScale::physical)
        return detail::accumulate_response(returns_i, signs_j,
                                           ResponseScale::physical, config,
                                           t_s, CurveKind::shifted);
    return trade_shift_response(returns_i, signs_j, t_s, config);
}

ShiftScan run_shift_scan(std::span<const MidpointSeries> returns_i,
                         std::span<const SignSeries> signs_j,
                         const ShiftScanConfig& config) {
    if (config.grid.empty()) throw std::runtime_error("shift scan: empty grid");

    ShiftScan scan;
    scan.config = config;
    scan.curves.reserve(config.grid.size());

    if (config.mode == ShiftScanConfig::Mode::fixed_tau_vary_shift) {
        EstimatorConfig est = config.est;
        est.lags = {config.fixed_value};
        if (est.tau_max < config.fixed_value) est.tau_max = config.fixed_value;
        for (const auto t_s : config.grid)
            scan.curves.push_back(response_with_shift(returns_i, signs_j, t_s,
                                                      config.scale, est));
        return scan;
    }

    // fixed_shift_vary_tau: per-lag accumulation is independent, so one
    // multi-lag pass split per grid point equals point-by-point evaluation.
    EstimatorConfig est = config.est;
    est.lags = config.grid;
    const auto max_lag = *std::max_element(config.grid.begin(), config.grid.end());
    if (est.tau_max < max_lag) est.tau_max = max_lag;
    const auto full = response_with_shift(returns_i, signs_j,
                                          config.fixed_value, config.scale, est);
    for (std::size_t i = 0; i < full.lags.size(); ++i) {
        ResponseCurve point;
        point.kind = full.kind;
        point.lags = {full.lags[i]};
        point.values = {full.values[i]};
        point.counts = {full.counts[i]};
        point.den = {full.den[i]};
        point.abs_weight = {full.abs_weight[i]};
        point.m2 = {full.m2[i]};
        point.stderrs = {full.stderrs[i]};
        point.meta = full.meta;
        scan.curves.push_back(std::move(point));
    }
    return scan;
}

}  // namespace mresp
