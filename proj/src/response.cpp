#include "mresp/response.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "mresp/numeric.hpp"

namespace mresp {

std::vector<std::int32_t> EstimatorConfig::lag_grid() const {
    if (tau_max < 1) throw std::runtime_error("estimator: tau_max must be >= 1");
    std::vector<std::int32_t> grid;
    if (lags.empty()) {
        grid.resize(static_cast<std::size_t>(tau_max));
        for (std::int32_t i = 0; i < tau_max; ++i)
            grid[static_cast<std::size_t>(i)] = i + 1;
        return grid;
    }
    grid = lags;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 1 || grid[i] > tau_max)
            throw std::runtime_error("estimator: lag outside [1, tau_max]");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw std::runtime_error("estimator: lags must be strictly increasing");
    }
    return grid;
}

namespace detail {

std::vector<DayPair> align_days(std::span<const MidpointSeries> mids,
                                std::span<const SignSeries> signs) {
    std::map<std::int64_t, DayPair> by_day;
    for (const auto& m : mids) by_day[m.day.day_number()].mid = &m;
    for (const auto& s : signs) {
        auto it = by_day.find(s.day.day_number());
        if (it != by_day.end()) it->second.signs = &s;
    }
    std::vector<DayPair> out;
    for (const auto& [day, pair] : by_day)
        if (pair.mid && pair.signs) out.push_back(pair);
    if (out.empty())
        throw std::runtime_error("estimator: no common days between inputs");
    return out;
}

namespace {

// Per-day accumulation product. num comes from compensated sums; den,
// counts and abs_weight are integer-valued and therefore exact doubles.
struct DayPartial {
    std::vector<double> num;
    std::vector<double> den;
    std::vector<std::int64_t> cnt;
    std::vector<double> absw;
};

DayPartial accumulate_day(const MidpointSeries& mid, const SignSeries& sg,
                          ResponseScale scale, bool exclude_zero,
                          ReturnKind kind,
                          std::span<const std::int32_t> lags,
                          std::int32_t t_shift) {
    const auto n_lags = lags.size();
    DayPartial out;
    out.num.assign(n_lags, 0.0);
    out.den.assign(n_lags, 0.0);
    out.cnt.assign(n_lags, 0);
    out.absw.assign(n_lags, 0.0);
    if (mid.length() != sg.length())
        throw std::runtime_error("estimator: midpoint/sign length mismatch");

    std::vector<NeumaierSum> num(n_lags);
    // Weight/count totals depend on tau only through the valid-lag cutoff,
    // so they are bucketed at each second's last valid lag index and
    // suffix-summed afterwards; integer arithmetic keeps this exact.
    std::vector<double> den_bucket(n_lags, 0.0);
    std::vector<std::int64_t> cnt_bucket(n_lags, 0);
    std::vector<double> absw_bucket(n_lags, 0.0);

    const std::int32_t len = mid.length();
    for (std::int32_t k = 0; k < len; ++k) {
        double w, c, aw;
        const auto ku = static_cast<std::size_t>(k);
        switch (scale) {
            case ResponseScale::trade: {
                const auto n = sg.n[ku];
                if (n == 0) continue;
                w = static_cast<double>(n);
                c = static_cast<double>(sg.e[ku]);
                aw = std::fabs(c);
                break;
            }
            case ResponseScale::physical: {
                const auto eps = sg.eps_p[ku];
                if (exclude_zero && eps == 0) continue;
                w = 1.0;
                c = static_cast<double>(eps);
                aw = 1.0;
                break;
            }
            case ResponseScale::activity: {
                const auto n = sg.n[ku];
                if (n == 0) continue;
                w = static_cast<double>(n);
                c = static_cast<double>(sg.eps_p[ku]) * w;
                aw = w;
                break;
            }
            default:
                throw std::runtime_error("estimator: unknown scale");
        }

        const std::int32_t anchor = k - t_shift;
        if (anchor < mid.defined_from) continue;
        const std::int32_t max_tau = len - 1 - anchor;
        if (max_tau < 1 || max_tau < lags.front()) continue;

        // Number of grid lags usable from this anchor.
        const auto valid =
            static_cast<std::size_t>(std::upper_bound(lags.begin(), lags.end(),
                                                      max_tau) -
                                     lags.begin());
        den_bucket[valid - 1] += w;
        cnt_bucket[valid - 1] += 1;
        absw_bucket[valid - 1] += aw;

        if (c != 0.0) {
            const double m0 = mid.m[static_cast<std::size_t>(anchor)];
            if (kind == ReturnKind::relative) {
                for (std::size_t li = 0; li < valid; ++li) {
                    const double m1 =
                        mid.m[static_cast<std::size_t>(anchor + lags[li])];
                    num[li].add((m1 - m0) / m0 * c);
                }
            } else {
                for (std::size_t li = 0; li < valid; ++li) {
                    const double m1 =
                        mid.m[static_cast<std::size_t>(anchor + lags[li])];
                    num[li].add(std::log(m1 / m0) * c);
                }
            }
        }
    }

    double den_tail = 0.0, absw_tail = 0.0;
    std::int64_t cnt_tail = 0;
    for (std::size_t li = n_lags; li-- > 0;) {
        den_tail += den_bucket[li];
        cnt_tail += cnt_bucket[li];
        absw_tail += absw_bucket[li];
        out.den[li] = den_tail;
        out.cnt[li] = cnt_tail;
        out.absw[li] = absw_tail;
        out.num[li] = num[li].value();
    }
    return out;
}

// Merges per-day partials in ascending day order and derives values and
// day-clustered standard errors. Identical for any worker count because the
// merge order is fixed.
ResponseCurve assemble_curve(std::vector<DayPartial>&& partials,
                             std::vector<std::int32_t>&& lags, CurveKind kind,
                             CurveMeta&& meta) {
    const auto n_lags = lags.size();
    const auto n_days = partials.size();
    ResponseCurve curve;
    curve.kind = kind;
    curve.lags = std::move(lags);
    curve.values.assign(n_lags, std::numeric_limits<double>::quiet_NaN());
    curve.counts.assign(n_lags, 0);
    curve.den.assign(n_lags, 0.0);
    curve.abs_weight.assign(n_lags, 0.0);
    curve.m2.assign(n_lags, 0.0);
    curve.stderrs.assign(n_lags, std::numeric_limits<double>::quiet_NaN());
    curve.meta = std::move(meta);

    for (std::size_t li = 0; li < n_lags; ++li) {
        NeumaierSum num;
        double den = 0.0, absw = 0.0;
        std::int64_t cnt = 0;
        for (std::size_t d = 0; d < n_days; ++d) {
            num.add(partials[d].num[li]);
            den += partials[d].den[li];
            absw += partials[d].absw[li];
            cnt += partials[d].cnt[li];
        }
        curve.counts[li] = cnt;
        curve.den[li] = den;
        curve.abs_weight[li] = absw;
        if (cnt == 0 || den <= 0.0) continue;
        const double value = num.value() / den;
        curve.values[li] = value;

        NeumaierSum m2;
        std::int64_t active_days = 0;
        for (std::size_t d = 0; d < n_days; ++d) {
            if (partials[d].den[li] <= 0.0) continue;
            ++active_days;
            const double resid = partials[d].num[li] - value * partials[d].den[li];
            m2.add(resid * resid);
        }
        curve.m2[li] = m2.value();
        if (active_days >= 2) {
            const double d = static_cast<double>(active_days);
            curve.stderrs[li] =
                std::sqrt(curve.m2[li] * d / (d - 1.0)) / den;
        }
    }
    return curve;
}

}  // namespace

ResponseCurve accumulate_response(std::span<const MidpointSeries> mids,
                                  std::span<const SignSeries> signs,
                                  ResponseScale scale,
                                  const EstimatorConfig& config,
                                  std::int32_t t_shift, CurveKind kind) {
    auto lags = config.lag_grid();
    const auto pairs = align_days(mids, signs);

    std::vector<DayPartial> partials(pairs.size());
    parallel_for(pairs.size(), config.workers, [&](std::size_t d) {
        partials[d] = accumulate_day(*pairs[d].mid, *pairs[d].signs, scale,
                                     config.exclude_zero_sign,
                                     config.return_kind, lags, t_shift);
    });

    CurveMeta meta;
    meta.first_day = pairs.front().mid->day;
    meta.last_day = pairs.back().mid->day;
    meta.n_days = static_cast<std::int32_t>(pairs.size());
    meta.return_kind = config.return_kind;
    meta.exclude_zero_sign = config.exclude_zero_sign;
    meta.t_shift = t_shift;
    return assemble_curve(std::move(partials), std::move(lags), kind,
                          std::move(meta));
}

}  // namespace detail

ResponseCurve response_trade_scale(std::span<const MidpointSeries> returns_i,
                                   std::span<const SignSeries> signs_j,
                                   const EstimatorConfig& config) {
    return detail::accumulate_response(returns_i, signs_j,
                                       ResponseScale::trade, config, 1,
                                       CurveKind::trade_scale);
}

ResponseCurve response_physical(std::span<const MidpointSeries> returns_i,
                                std::span<const SignSeries> signs_j,
                                const EstimatorConfig& config) {
    return detail::accumulate_response(returns_i, signs_j,
                                       ResponseScale::physical, config, 1,
                                       CurveKind::physical);
}

ResponseCurve response_activity(std::span<const MidpointSeries> returns_i,
                                std::span<const SignSeries> signs_j,
                                const EstimatorConfig& config) {
    return detail::accumulate_response(returns_i, signs_j,
                                       ResponseScale::activity, config, 1,
                                       CurveKind::activity);
}

ResponseCurve brute_force_response(std::span<const MidpointSeries> returns_i,
                                   std::span<const SignSeries> signs_j,
                                   ResponseScale scale,
                                   const EstimatorConfig& config) {
    const auto lags = config.lag_grid();
    const auto pairs = detail::align_days(returns_i, signs_j);

    ResponseCurve curve;
    curve.kind = scale == ResponseScale::trade      ? CurveKind::trade_scale
                 : scale == ResponseScale::physical ? CurveKind::physical
                                                    : CurveKind::activity;
    curve.lags = lags;
    const auto n_lags = lags.size();
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

    for (std::size_t li = 0; li < n_lags; ++li) {
        const std::int32_t tau = lags[li];
        long double num = 0.0L, den = 0.0L, absw = 0.0L;
        std::int64_t cnt = 0;
        for (const auto& pair : pairs) {
            const auto& mid = *pair.mid;
            const auto& sg = *pair.signs;
            for (std::int32_t k = 0; k < mid.length(); ++k) {
                const auto ku = static_cast<std::size_t>(k);
                double w, c, aw;
                if (scale == ResponseScale::trade) {
                    if (sg.n[ku] == 0) continue;
                    w = static_cast<double>(sg.n[ku]);
                    c = static_cast<double>(sg.e[ku]);
                    aw = std::fabs(c);
                } else if (scale == ResponseScale::physical) {
                    if (config.exclude_zero_sign && sg.eps_p[ku] == 0) continue;
                    w = 1.0;
                    c = static_cast<double>(sg.eps_p[ku]);
                    aw = 1.0;
                } else {
                    if (sg.n[ku] == 0) continue;
                    w = static_cast<double>(sg.n[ku]);
                    c = static_cast<double>(sg.eps_p[ku]) * w;
                    aw = w;
                }
                const auto r =
                    compute_return(mid, k - 1, tau, config.return_kind);
                if (!r) continue;
                num += static_cast<long double>(*r) * static_cast<long double>(c);
                den += static_cast<long double>(w);
                absw += static_cast<long double>(aw);
                cnt += 1;
            }
        }
        curve.counts[li] = cnt;
        curve.den[li] = static_cast<double>(den);
        curve.abs_weight[li] = static_cast<double>(absw);
        if (cnt > 0 && den > 0.0L)
            curve.values[li] = static_cast<double>(num / den);
    }
    return curve;
}

}  // namespace mresp
