#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "mresp/response.hpp"
#include "mresp/time_shift.hpp"

using namespace mresp;

namespace {

EstimatorConfig config_with(std::int32_t tau_max,
                            std::vector<std::int32_t> lags = {},
                            ReturnKind kind = ReturnKind::relative,
                            bool exclude = true) {
    EstimatorConfig cfg;
    cfg.tau_max = tau_max;
    cfg.lags = std::move(lags);
    cfg.return_kind = kind;
    cfg.exclude_zero_sign = exclude;
    return cfg;
}

testutil::SynthSeries busy_fixture() {
    SynthParams params;
    params.days = 3;
    params.seconds_per_day = 600;
    params.trades_law.kind = SynthParams::TradesLaw::Kind::geometric;
    params.trades_law.value = 2.0;
    params.seed = 101;
    return testutil::build_series(params);
}

// Values compared where both defined; counts/weights compared exactly.
void check_same_curve(const ResponseCurve& a, const ResponseCurve& b) {
    REQUIRE(a.lags == b.lags);
    CHECK(a.counts == b.counts);
    CHECK(a.den == b.den);
    CHECK(a.abs_weight == b.abs_weight);
    for (std::size_t li = 0; li < a.lags.size(); ++li) {
        REQUIRE(a.has_value(li) == b.has_value(li));
        if (a.has_value(li)) CHECK(a.values[li] == b.values[li]);
        if (!std::isnan(a.stderrs[li]) || !std::isnan(b.stderrs[li]))
            CHECK(a.stderrs[li] == b.stderrs[li]);
    }
}

double literal_return(const MidpointSeries& mid, std::int64_t from,
                      std::int64_t to, ReturnKind kind) {
    const double m0 = mid.m[static_cast<std::size_t>(from)];
    const double m1 = mid.m[static_cast<std::size_t>(to)];
    return kind == ReturnKind::relative ? (m1 - m0) / m0 : std::log(m1 / m0);
}

// Sample-by-sample reference for the second-anchored shifted estimator.
ResponseCurve slow_physical_shift(std::span<const MidpointSeries> mids,
                                  std::span<const SignSeries> signs,
                                  std::int32_t t_s,
                                  const EstimatorConfig& cfg) {
    const auto lags = cfg.lag_grid();
    ResponseCurve out;
    out.lags = lags;
    out.values.assign(lags.size(), std::numeric_limits<double>::quiet_NaN());
    out.counts.assign(lags.size(), 0);
    out.den.assign(lags.size(), 0.0);
    for (std::size_t li = 0; li < lags.size(); ++li) {
        long double num = 0.0L;
        for (std::size_t d = 0; d < mids.size(); ++d) {
            const auto& mid = mids[d];
            const auto& sg = signs[d];
            const auto len = static_cast<std::int64_t>(mid.length());
            for (std::int64_t k = 0; k < len; ++k) {
                const int eps = sg.eps_p[static_cast<std::size_t>(k)];
                if (cfg.exclude_zero_sign && eps == 0) continue;
                const std::int64_t anchor = k - t_s;
                if (anchor < mid.defined_from) continue;
                if (anchor + lags[li] > len - 1) continue;
                num += static_cast<long double>(
                           literal_return(mid, anchor, anchor + lags[li],
                                          cfg.return_kind)) *
                       eps;
                out.den[li] += 1.0;
                out.counts[li] += 1;
            }
        }
        if (out.counts[li] > 0)
            out.values[li] = static_cast<double>(num) / out.den[li];
    }
    return out;
}

// Sample-by-sample reference for the trade-anchored shifted estimator: each
// trade carries the midpoint standing at the end of the second before its
// own, and both the offset and the lags count trades.
ResponseCurve slow_trade_shift(std::span<const MidpointSeries> mids,
                               std::span<const SignSeries> signs,
                               std::int32_t t_s, const EstimatorConfig& cfg) {
    const auto lags = cfg.lag_grid();
    ResponseCurve out;
    out.lags = lags;
    out.values.assign(lags.size(), std::numeric_limits<double>::quiet_NaN());
    out.counts.assign(lags.size(), 0);
    out.den.assign(lags.size(), 0.0);
    for (std::size_t li = 0; li < lags.size(); ++li) {
        long double num = 0.0L;
        for (std::size_t d = 0; d < mids.size(); ++d) {
            const auto& mid = mids[d];
            const auto& sg = signs[d];
            const auto n_trades = static_cast<std::int64_t>(sg.trade_sec.size());
            for (std::int64_t n = 0; n < n_trades; ++n) {
                const std::int64_t a = n - t_s;
                if (a < 0 || a + lags[li] > n_trades - 1) continue;
                const std::int64_t sec_a =
                    sg.trade_sec[static_cast<std::size_t>(a)] - 1;
                if (sec_a < mid.defined_from) continue;
                const std::int64_t sec_b =
                    sg.trade_sec[static_cast<std::size_t>(a + lags[li])] - 1;
                num += static_cast<long double>(literal_return(
                           mid, sec_a, sec_b, cfg.return_kind)) *
                       sg.trade_sign[static_cast<std::size_t>(n)];
                out.den[li] += 1.0;
                out.counts[li] += 1;
            }
        }
        if (out.counts[li] > 0)
            out.values[li] = static_cast<double>(num) / out.den[li];
    }
    return out;
}

void check_against_slow(const ResponseCurve& fast, const ResponseCurve& slow) {
    REQUIRE(fast.lags == slow.lags);
    for (std::size_t li = 0; li < fast.lags.size(); ++li) {
        CHECK(fast.counts[li] == slow.counts[li]);
        CHECK(fast.den[li] == slow.den[li]);
        REQUIRE(fast.has_value(li) == slow.has_value(li));
        if (!fast.has_value(li)) continue;
        const double scale = std::max(
            {std::fabs(fast.values[li]), std::fabs(slow.values[li]), 1e-300});
        CHECK(std::fabs(fast.values[li] - slow.values[li]) / scale <= 1e-12);
    }
}

}  // namespace

TEST_CASE("offset one on the second scale is the base estimator") {
    const auto series = busy_fixture();
    const auto cfg = config_with(25);
    const auto base = response_physical(series.mids, series.signs, cfg);
    const auto shifted = response_with_shift(series.mids, series.signs, 1,
                                             ShiftScale::physical, cfg);
    check_same_curve(base, shifted);
    CHECK(shifted.kind == CurveKind::shifted);
    CHECK(shifted.meta.t_shift == 1);
}

TEST_CASE("second-scale shifts match the literal reference") {
    const auto series = busy_fixture();
    for (const std::int32_t t_s : {-3, -1, 0, 1, 2, 5}) {
        auto cfg = config_with(12, {1, 2, 3, 7, 12});
        const auto fast = response_with_shift(series.mids, series.signs, t_s,
                                              ShiftScale::physical, cfg);
        check_against_slow(fast,
                           slow_physical_shift(series.mids, series.signs, t_s, cfg));

        cfg.return_kind = ReturnKind::logarithmic;
        const auto fast_log = response_with_shift(series.mids, series.signs, t_s,
                                                  ShiftScale::physical, cfg);
        check_against_slow(
            fast_log, slow_physical_shift(series.mids, series.signs, t_s, cfg));
    }
    // Including zero-sign seconds changes denominators; the reference agrees.
    auto incl = config_with(8, {1, 4, 8}, ReturnKind::relative, false);
    const auto fast = response_with_shift(series.mids, series.signs, -2,
                                          ShiftScale::physical, incl);
    check_against_slow(fast,
                       slow_physical_shift(series.mids, series.signs, -2, incl));
}

TEST_CASE("trade-scale shifts match the literal reference") {
    const auto series = busy_fixture();
    for (const std::int32_t t_s : {-2, 0, 1, 3}) {
        for (const auto kind : {ReturnKind::relative, ReturnKind::logarithmic}) {
            const auto cfg = config_with(9, {1, 2, 5, 9}, kind);
            const auto fast = response_with_shift(series.mids, series.signs, t_s,
                                                  ShiftScale::trade, cfg);
            check_against_slow(
                fast, slow_trade_shift(series.mids, series.signs, t_s, cfg));
        }
    }
}

TEST_CASE("oversized offsets yield empty curves, not errors") {
    const auto series = busy_fixture();
    const auto len = static_cast<std::int32_t>(series.mids.front().length());
    // The trade scale measures offsets in trades, so the "oversized" offset
    // must exceed the busiest day's trade count as well as the day length.
    std::size_t max_trades = 0;
    for (const auto& s : series.signs) {
        max_trades = std::max(max_trades, s.trade_sec.size());
    }
    const auto big =
        std::max(len, static_cast<std::int32_t>(max_trades)) + 10;
    const auto cfg = config_with(5);
    for (const std::int32_t t_s : {big, -big}) {
        for (const auto scale : {ShiftScale::physical, ShiftScale::trade}) {
            const auto curve = response_with_shift(series.mids, series.signs,
                                                   t_s, scale, cfg);
            for (std::size_t li = 0; li < curve.lags.size(); ++li) {
                CHECK_FALSE(curve.has_value(li));
                CHECK(curve.counts[li] == 0);
                CHECK(curve.den[li] == 0.0);
            }
        }
    }
}

TEST_CASE("sample counts follow window clipping exactly") {
    // One trade every second: the valid anchors are a pure window-geometry
    // count. Inside 0 <= t_s <= tau the window is full width; outside it
    // shrinks by one sample per extra second of offset.
    SynthParams params;
    params.days = 2;
    params.seconds_per_day = 400;
    params.seed = 7;
    // Ground-truth signs: every second carries a nonzero sign, so no sample
    // drops out for sign reasons and the count is pure geometry.
    const auto series = testutil::build_series(params, 1, true);
    const auto len = static_cast<std::int64_t>(params.seconds_per_day);
    const auto days = static_cast<std::int64_t>(params.days);
    const std::int32_t tau = 20;
    const auto cfg = config_with(tau, {tau});

    for (std::int32_t t_s = -30; t_s <= 60; ++t_s) {
        const auto curve = response_with_shift(series.mids, series.signs, t_s,
                                               ShiftScale::physical, cfg);
        std::int64_t expected = 0;
        if (t_s < 0)
            expected = std::max<std::int64_t>(0, len + t_s - tau);
        else if (t_s <= tau)
            expected = len - tau;
        else
            expected = std::max<std::int64_t>(0, len - t_s);
        CHECK(curve.counts[0] == days * expected);
    }
}

TEST_CASE("scan over offsets equals one estimator call per grid point") {
    const auto series = busy_fixture();
    ShiftScanConfig scan_cfg;
    scan_cfg.mode = ShiftScanConfig::Mode::fixed_tau_vary_shift;
    scan_cfg.fixed_value = 3;
    scan_cfg.grid = {-5, -2, 0, 1, 3, 8};
    scan_cfg.scale = ShiftScale::physical;
    scan_cfg.est = config_with(10);
    const auto scan = run_shift_scan(series.mids, series.signs, scan_cfg);
    REQUIRE(scan.curves.size() == scan_cfg.grid.size());
    for (std::size_t g = 0; g < scan_cfg.grid.size(); ++g) {
        auto est = scan_cfg.est;
        est.lags = {3};
        const auto direct = response_with_shift(
            series.mids, series.signs, scan_cfg.grid[g], ShiftScale::physical, est);
        REQUIRE(scan.curves[g].lags == std::vector<std::int32_t>{3});
        check_same_curve(scan.curves[g], direct);
        CHECK(scan.curves[g].meta.t_shift == scan_cfg.grid[g]);
    }
}

TEST_CASE("scan over lags at a fixed offset splits a single pass") {
    const auto series = busy_fixture();
    ShiftScanConfig scan_cfg;
    scan_cfg.mode = ShiftScanConfig::Mode::fixed_shift_vary_tau;
    scan_cfg.fixed_value = 2;
    scan_cfg.grid = {1, 4, 7};
    scan_cfg.scale = ShiftScale::trade;
    scan_cfg.est = config_with(7);
    const auto scan = run_shift_scan(series.mids, series.signs, scan_cfg);
    REQUIRE(scan.curves.size() == 3);
    for (std::size_t g = 0; g < scan_cfg.grid.size(); ++g) {
        auto est = scan_cfg.est;
        est.lags = {scan_cfg.grid[g]};
        const auto direct = response_with_shift(series.mids, series.signs, 2,
                                                ShiftScale::trade, est);
        check_same_curve(scan.curves[g], direct);
    }
}

TEST_CASE("an empty scan grid is rejected") {
    const auto series = busy_fixture();
    ShiftScanConfig scan_cfg;
    scan_cfg.grid = {};
    CHECK_THROWS_AS(run_shift_scan(series.mids, series.signs, scan_cfg),
                    std::runtime_error);
}

TEST_CASE("shifting the whole day leaves every estimator unchanged") {
    const auto series = busy_fixture();

    // Translate each day five seconds later: prepend five undefined seconds
    // to the midpoints and five tradeless seconds to the signs.
    std::vector<MidpointSeries> mids2;
    std::vector<SignSeries> signs2;
    for (const auto& mid : series.mids) {
        MidpointSeries m2 = mid;
        m2.m.insert(m2.m.begin(), 5, 0.0);
        m2.s.insert(m2.s.begin(), 5, 0.0);
        m2.defined_from = mid.defined_from + 5;
        mids2.push_back(std::move(m2));
    }
    for (const auto& sg : series.signs) {
        SignSeries s2 = sg;
        s2.n.insert(s2.n.begin(), 5, 0);
        s2.e.insert(s2.e.begin(), 5, 0);
        s2.eps_p.insert(s2.eps_p.begin(), 5, 0);
        for (auto& sec : s2.trade_sec) sec += 5;
        signs2.push_back(std::move(s2));
    }

    for (const std::int32_t t_s : {-2, 1, 4}) {
        for (const auto scale : {ShiftScale::physical, ShiftScale::trade}) {
            const auto cfg = config_with(10, {1, 5, 10});
            const auto a =
                response_with_shift(series.mids, series.signs, t_s, scale, cfg);
            const auto b = response_with_shift(mids2, signs2, t_s, scale, cfg);
            check_same_curve(a, b);
        }
    }
}
