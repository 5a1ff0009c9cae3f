#pragma once

#include <cstdint>
#include <vector>

#include "mresp/events.hpp"
#include "mresp/trade_signs.hpp"

namespace mresp {

// Synthetic market with known ground truth. Trade signs follow a two-state
// Markov chain (persistence p -> sign autocorrelation C(k) = (2p-1)^k,
// mimicking order splitting); each trade moves the log midpoint by `impact`
// in its direction, permanently or with exponential decay; an independent
// Gaussian log-price noise is added once per second. Trade prices step on
// the tick grid in the trade's direction (or repeat on same-side follow-ups)
// so the tick rule recovers the true signs exactly.
struct SynthParams {
    std::int32_t days = 4;
    std::int32_t seconds_per_day = 22200;
    double p_persist = 0.7;   // P(next sign == previous sign), in [0.5, 1)
    double impact = 1e-4;     // per-trade log-midpoint step (lambda)
    double noise_sigma = 1e-4;  // per-second log-price noise std

    struct TradesLaw {
        enum class Kind { fixed, geometric };
        Kind kind = Kind::fixed;
        double value = 1.0;  // fixed count, or geometric mean
    } trades_law;

    struct ImpactKernel {
        enum class Kind { permanent, transient };
        Kind kind = Kind::permanent;
        double decay = 50.0;  // transient decay length in seconds
    } kernel;

    double tick = 0.01;
    double base_spread = 0.04;
    double base_price = 100.0;
    Date start_day{2008, 1, 2};
    MarketWindow window{};
    std::uint64_t seed = 42;

    // Throws std::runtime_error on out-of-range values.
    void validate() const;
};

// One generated day: raw event streams plus the generator's own signs.
// `truth` counts every trade (nothing is unresolved for the generator).
struct SynthDay {
    Date day;
    std::vector<QuoteEvent> quotes;
    std::vector<TradeEvent> trades;
    SignSeries truth;
};

struct SynthData {
    std::vector<SynthDay> days;
};

// Deterministic: identical params give byte-identical streams at any worker
// count (each day draws from its own derived seed).
SynthData generate(const SynthParams& params, int workers = 1);
SynthDay generate_day(const SynthParams& params, std::int32_t day_index);

// Expected physical-scale response (exclude-zero, one trade per second).
// Permanent kernel: closed form impact*(1-(2p-1)^tau)/(2-2p). Transient
// kernel: direct expectation sum over the sign autocorrelation. Throws
// unless the trades law is fixed at one per second.
double theoretical_response(const SynthParams& params, std::int32_t tau);

}  // namespace mresp
