#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "mresp/midpoint.hpp"
#include "mresp/synth.hpp"

using namespace mresp;

namespace {

QuoteEvent quote(std::int32_t t, std::int32_t seq, double bid, double ask) {
    return QuoteEvent{testutil::day0(), t, seq, bid, ask, 100, 100};
}

}  // namespace

TEST_CASE("midpoint and spread come from the last quote of each second") {
    const MarketWindow w{34800, 34810};
    const std::vector<QuoteEvent> quotes = {
        quote(34800, 0, 100.00, 100.02),
        // Second 34802 has two quotes; the later one wins.
        quote(34802, 0, 100.00, 100.02),
        quote(34802, 1, 100.02, 100.04),
    };
    const auto series = build_midpoint_series(quotes, w);
    CHECK(series.length() == 10);
    CHECK(series.defined_from == 0);
    // The midpoint is the bid/ask average, bit for bit.
    const double m_low = (100.00 + 100.02) / 2.0;
    const double m_high = (100.02 + 100.04) / 2.0;
    CHECK(series.m[0] == m_low);
    CHECK(series.m[0] == doctest::Approx(100.01).epsilon(1e-12));
    CHECK(series.s[0] == doctest::Approx(0.02).epsilon(1e-12));
    // Quoteless second carries the previous value forward.
    CHECK(series.m[1] == m_low);
    CHECK(series.m[2] == m_high);
    // Forward fill continues to the end of the window.
    for (std::size_t k = 3; k < 10; ++k) CHECK(series.m[k] == m_high);
}

TEST_CASE("seconds before the first quote stay undefined") {
    const MarketWindow w{34800, 34810};
    const std::vector<QuoteEvent> late = {quote(34805, 0, 100.00, 100.02)};
    const auto series = build_midpoint_series(late, w);
    CHECK(series.defined_from == 5);
    CHECK_FALSE(series.defined(4));
    CHECK(series.defined(5));
    CHECK_FALSE(compute_return(series, 3, 1, ReturnKind::relative).has_value());
}

TEST_CASE("empty or out-of-window days are errors") {
    const MarketWindow w{34800, 34810};
    const std::vector<QuoteEvent> none;
    const std::vector<QuoteEvent> outside = {quote(34811, 0, 100.0, 100.1)};
    CHECK_THROWS_AS(build_midpoint_series(none, w), std::runtime_error);
    CHECK_THROWS_AS(build_midpoint_series(outside, w), std::runtime_error);
}

TEST_CASE("returns match the worked examples") {
    const auto series = testutil::make_mids({100.00, 100.02});
    const auto rel = compute_return(series, 0, 1, ReturnKind::relative);
    const auto lg = compute_return(series, 0, 1, ReturnKind::logarithmic);
    REQUIRE(rel.has_value());
    REQUIRE(lg.has_value());
    CHECK(*rel == doctest::Approx(2.0e-4).epsilon(1e-12));
    CHECK(*lg == doctest::Approx(1.99980e-4).epsilon(1e-5));
    CHECK(std::fabs(*rel - *lg) < 2.1e-8);
    // Identical endpoints give exactly zero either way.
    const auto flat = testutil::make_mids({100.02, 100.02});
    CHECK(*compute_return(flat, 0, 1, ReturnKind::relative) == 0.0);
    CHECK(*compute_return(flat, 0, 1, ReturnKind::logarithmic) == 0.0);
}

TEST_CASE("returns require both endpoints inside the defined day") {
    const auto series = testutil::make_mids({0.0, 0.0, 100.0, 100.1, 100.2}, 2);
    CHECK_FALSE(compute_return(series, 1, 1, ReturnKind::relative).has_value());
    CHECK(compute_return(series, 2, 2, ReturnKind::relative).has_value());
    CHECK_FALSE(compute_return(series, 3, 2, ReturnKind::relative).has_value());
    CHECK_FALSE(compute_return(series, 2, 0, ReturnKind::relative).has_value());
    CHECK_FALSE(compute_return(series, 2, -1, ReturnKind::relative).has_value());
}

TEST_CASE("logarithmic returns compose additively and reverse exactly") {
    const auto series =
        testutil::make_mids({100.00, 100.05, 99.98, 100.12, 100.3});
    const double r02 = *compute_return(series, 0, 2, ReturnKind::logarithmic);
    const double r01 = *compute_return(series, 0, 1, ReturnKind::logarithmic);
    const double r12 = *compute_return(series, 1, 1, ReturnKind::logarithmic);
    CHECK(r02 == doctest::Approx(r01 + r12).epsilon(1e-13));

    const double fwd = *compute_return(series, 0, 3, ReturnKind::logarithmic);
    const auto reversed = testutil::make_mids({100.12, 0.0, 0.0, 100.00});
    const double bwd = *compute_return(reversed, 0, 3, ReturnKind::logarithmic);
    CHECK(fwd == doctest::Approx(-bwd).epsilon(1e-13));

    // First-order agreement bound between the two kinds.
    const double rel = *compute_return(series, 0, 3, ReturnKind::relative);
    CHECK(std::fabs(rel - fwd) <= rel * rel);
}

TEST_CASE("sampling diagnostic measures last-vs-mean discrepancy") {
    // One quote per second: last equals mean, statistic is exactly zero.
    const std::vector<QuoteEvent> uniform = {
        quote(34800, 0, 100.00, 100.02),
        quote(34801, 0, 100.02, 100.04),
    };
    CHECK(midpoint_sampling_diagnostic(uniform) == 0.0);

    // A second with midpoints 100.00 then 100.02: |100.02-100.01|/100.01.
    const std::vector<QuoteEvent> split = {
        quote(34800, 0, 99.99, 100.01),
        quote(34800, 1, 100.01, 100.03),
    };
    CHECK(midpoint_sampling_diagnostic(split) ==
          doctest::Approx(0.01 / 100.01).epsilon(1e-12));

    // Generated data stays well under a 0.1% discrepancy.
    SynthParams params;
    params.days = 1;
    params.seconds_per_day = 5000;
    params.trades_law.kind = SynthParams::TradesLaw::Kind::geometric;
    params.trades_law.value = 3.0;
    const auto day = generate_day(params, 0);
    CHECK(midpoint_sampling_diagnostic(day.quotes) < 1e-3);
}
