#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "mresp/midpoint.hpp"
#include "mresp/response.hpp"
#include "mresp/synth.hpp"

using namespace mresp;

TEST_CASE("generation is reproducible at any worker count") {
    SynthParams params;
    params.days = 4;
    params.seconds_per_day = 1500;
    params.trades_law.kind = SynthParams::TradesLaw::Kind::geometric;
    params.trades_law.value = 2.0;
    params.seed = 99;
    const auto serial = generate(params, 1);
    const auto threaded = generate(params, 3);
    const auto repeat = generate(params, 1);
    REQUIRE(serial.days.size() == 4);
    for (std::size_t d = 0; d < serial.days.size(); ++d) {
        CHECK(serial.days[d].quotes == threaded.days[d].quotes);
        CHECK(serial.days[d].trades == threaded.days[d].trades);
        CHECK(serial.days[d].quotes == repeat.days[d].quotes);
        CHECK(serial.days[d].trades == repeat.days[d].trades);
        CHECK(serial.days[d].truth.e == threaded.days[d].truth.e);
    }
}

TEST_CASE("parameters are validated") {
    SynthParams params;
    params.p_persist = 0.4;
    CHECK_THROWS_AS(params.validate(), std::runtime_error);
    params = SynthParams{};
    params.p_persist = 1.0;
    CHECK_THROWS_AS(params.validate(), std::runtime_error);
    params = SynthParams{};
    params.impact = -1e-4;
    CHECK_THROWS_AS(params.validate(), std::runtime_error);
    params = SynthParams{};
    params.tick = 0.0;
    CHECK_THROWS_AS(params.validate(), std::runtime_error);
    params = SynthParams{};
    params.days = 0;
    CHECK_THROWS_AS(params.validate(), std::runtime_error);
    CHECK_NOTHROW(SynthParams{}.validate());
}

TEST_CASE("generated streams satisfy the event invariants") {
    SynthParams params;
    params.days = 1;
    params.seconds_per_day = 2000;
    params.trades_law.kind = SynthParams::TradesLaw::Kind::geometric;
    params.trades_law.value = 3.0;
    const auto day = generate_day(params, 0);
    const auto window = testutil::effective_window(params);

    REQUIRE_FALSE(day.quotes.empty());
    std::int32_t last_t = -1, last_seq = -1;
    for (const auto& q : day.quotes) {
        CHECK(window.contains(q.t));
        CHECK(q.bid > 0.0);
        CHECK(q.ask >= q.bid);
        if (q.t == last_t) {
            CHECK(q.seq > last_seq);
        } else {
            CHECK(q.t > last_t);
        }
        last_t = q.t;
        last_seq = q.seq;
        // Quote prices live on the tick grid.
        const double bid_ticks = q.bid / params.tick;
        CHECK(std::fabs(bid_ticks - std::round(bid_ticks)) < 1e-6);
    }
    long long n_trades = 0;
    for (const auto& t : day.trades) {
        CHECK(window.contains(t.t));
        CHECK(t.price > 0.0);
        CHECK(t.volume > 0);
        const double price_ticks = t.price / params.tick;
        CHECK(std::fabs(price_ticks - std::round(price_ticks)) < 1e-6);
        ++n_trades;
    }
    // Ground truth covers every generated trade.
    long long truth_trades = 0;
    for (const auto n : day.truth.n) truth_trades += n;
    CHECK(truth_trades == n_trades);
    CHECK(day.truth.unresolved == 0);
}

TEST_CASE("degenerate impact and noise give a flat market") {
    SynthParams params;
    params.days = 2;
    params.seconds_per_day = 600;
    params.impact = 0.0;
    params.noise_sigma = 0.0;
    const auto series = testutil::build_series(params, 1, true);
    for (const auto& mid : series.mids)
        for (std::int32_t k = mid.defined_from; k < mid.length(); ++k)
            CHECK(mid.m[static_cast<std::size_t>(k)] == mid.m[0]);

    EstimatorConfig cfg;
    cfg.tau_max = 20;
    const auto curve = response_physical(series.mids, series.signs, cfg);
    for (std::size_t li = 0; li < curve.lags.size(); ++li) {
        REQUIRE(curve.has_value(li));
        CHECK(curve.values[li] == 0.0);
    }
}

TEST_CASE("closed-form response oracle") {
    SynthParams params;  // p = 0.7, impact 1e-4, fixed one trade per second
    CHECK(theoretical_response(params, 1) == params.impact);

    SynthParams memoryless = params;
    memoryless.p_persist = 0.5;
    for (const std::int32_t tau : {1, 5, 50})
        CHECK(theoretical_response(memoryless, tau) == params.impact);

    // tau = 10 at p = 0.7: impact * (1 - 0.4^10) / 0.6.
    CHECK(theoretical_response(params, 10) ==
          doctest::Approx(1.666492e-4).epsilon(1e-6));
    CHECK(theoretical_response(params, 10) ==
          doctest::Approx(1e-4 * (1.0 - std::pow(0.4, 10)) / 0.6)
              .epsilon(1e-14));

    // Monotone saturation toward impact / (2 - 2p).
    double prev = 0.0;
    for (std::int32_t tau = 1; tau <= 60; ++tau) {
        const double value = theoretical_response(params, tau);
        CHECK(value >= prev);
        CHECK(value <= params.impact / (2.0 - 2.0 * params.p_persist) + 1e-18);
        prev = value;
    }

    SynthParams geom = params;
    geom.trades_law.kind = SynthParams::TradesLaw::Kind::geometric;
    CHECK_THROWS_AS(theoretical_response(geom, 1), std::runtime_error);
    SynthParams two = params;
    two.trades_law.value = 2.0;
    CHECK_THROWS_AS(theoretical_response(two, 1), std::runtime_error);
}

TEST_CASE("transient oracle matches an independent expectation sum") {
    SynthParams params;
    params.kernel.kind = SynthParams::ImpactKernel::Kind::transient;
    params.kernel.decay = 50.0;

    // Independent evaluation: E[R(tau)] = lambda * (A - B) with
    // A = sum_{v <= tau-1} exp(-(tau-1-v)/l) rho^|v| and
    // B = sum_{v <= -1} exp(-(-1-v)/l) rho^|v|, truncated far into the tail.
    const double rho = 2.0 * params.p_persist - 1.0;
    const double decay = std::exp(-1.0 / params.kernel.decay);
    auto expectation = [&](std::int32_t tau) {
        long double a = 0.0L;
        for (std::int32_t v = tau - 1; v >= tau - 1 - 20000; --v)
            a += std::pow((long double)decay, (long double)(tau - 1 - v)) *
                 std::pow((long double)rho, (long double)std::abs(v));
        long double b = 0.0L;
        for (std::int32_t v = -1; v >= -20000; --v)
            b += std::pow((long double)decay, (long double)(-1 - v)) *
                 std::pow((long double)rho, (long double)(-v));
        return params.impact * static_cast<double>(a - b);
    };
    for (const std::int32_t tau : {1, 2, 5, 20, 100, 400}) {
        CHECK(theoretical_response(params, tau) ==
              doctest::Approx(expectation(tau)).epsilon(1e-10));
    }

    // Rise to an interior maximum, then decline: the transient hallmark.
    std::int32_t argmax = 1;
    double best = theoretical_response(params, 1);
    for (std::int32_t tau = 1; tau <= 1000; ++tau) {
        const double value = theoretical_response(params, tau);
        if (value > best) {
            best = value;
            argmax = tau;
        }
    }
    CHECK(argmax > 1);
    CHECK(argmax < 1000);
    CHECK(best > theoretical_response(params, 1));
    CHECK(best > theoretical_response(params, 1000));
}

TEST_CASE("sign chain has the designed autocorrelation") {
    SynthParams params;
    params.days = 46;  // ~1e6 trades at one per second
    params.seconds_per_day = 22000;
    params.seed = 20;

    auto measure = [](const SynthData& data) {
        long long pairs = 0, agree = 0;
        for (const auto& day : data.days) {
            const auto& signs = day.truth.trade_sign;
            for (std::size_t i = 1; i < signs.size(); ++i) {
                ++pairs;
                if (signs[i] == signs[i - 1]) ++agree;
            }
        }
        // C(1) = E[s_k s_{k+1}] = 2 P(agree) - 1.
        return std::pair<double, long long>(
            2.0 * static_cast<double>(agree) / static_cast<double>(pairs) - 1.0,
            pairs);
    };

    const auto [c1, pairs] = measure(generate(params));
    // Conservative standard error bound for a correlated +-1 product chain.
    const double se = 1.5 / std::sqrt(static_cast<double>(pairs));
    CHECK(std::fabs(c1 - 0.4) < 3.0 * se);

    SynthParams coin = params;
    coin.p_persist = 0.5;
    coin.seed = 21;
    const auto [c0, pairs0] = measure(generate(coin));
    CHECK(std::fabs(c0) < 3.0 / std::sqrt(static_cast<double>(pairs0)));
}
