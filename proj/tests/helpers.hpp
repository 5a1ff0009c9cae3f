// Shared fixture builders for the unit tests: hand-rolled series with known
// values, and generated series run through the real classification pipeline.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mresp/midpoint.hpp"
#include "mresp/synth.hpp"
#include "mresp/trade_signs.hpp"

namespace testutil {

using namespace mresp;

inline Date day0() { return Date{2008, 1, 2}; }

// Midpoint series over a tiny window starting at base_s, one value per
// second. Seconds before defined_from hold the 0.0 sentinel.
inline MidpointSeries make_mids(std::vector<double> m,
                                std::int32_t defined_from = 0,
                                Date day = day0(), std::int32_t base = 34800) {
    MidpointSeries out;
    out.day = day;
    out.base_s = base;
    out.defined_from = defined_from;
    out.s.assign(m.size(), 0.02);
    out.m = std::move(m);
    for (std::int32_t k = 0; k < defined_from; ++k)
        out.m[static_cast<std::size_t>(k)] = 0.0;
    return out;
}

// Trades for one second: the second offset and the individual trade signs.
struct SecondSigns {
    std::int32_t k = 0;
    std::vector<int> signs;
};

// Sign series of `len` seconds with trades only where listed (ascending k).
inline SignSeries make_signs(std::int32_t len,
                             const std::vector<SecondSigns>& seconds,
                             Date day = day0(), std::int32_t base = 34800) {
    SignSeries out;
    out.day = day;
    out.base_s = base;
    out.n.assign(static_cast<std::size_t>(len), 0);
    out.e.assign(static_cast<std::size_t>(len), 0);
    out.eps_p.assign(static_cast<std::size_t>(len), 0);
    std::int32_t prev = -1;
    for (const auto& sec : seconds) {
        if (sec.k <= prev || sec.k >= len)
            throw std::runtime_error("make_signs: seconds must ascend in range");
        prev = sec.k;
        const auto ku = static_cast<std::size_t>(sec.k);
        for (int sign : sec.signs) {
            out.n[ku] += 1;
            out.e[ku] += sign;
            out.trade_sec.push_back(sec.k);
            out.trade_sign.push_back(static_cast<std::int8_t>(sign));
        }
        out.eps_p[ku] =
            static_cast<std::int8_t>(out.e[ku] > 0 ? 1 : out.e[ku] < 0 ? -1 : 0);
    }
    return out;
}

// Generated market run through the real pipeline (tick-rule classification,
// not the generator's ground truth).
struct SynthSeries {
    std::vector<MidpointSeries> mids;
    std::vector<SignSeries> signs;
    std::int64_t unresolved = 0;
};

inline MarketWindow effective_window(const SynthParams& params) {
    return MarketWindow{params.window.open_s,
                        params.window.open_s + params.seconds_per_day};
}

inline SynthSeries build_series(const SynthParams& params, int workers = 1,
                                bool use_truth = false) {
    const auto data = generate(params, workers);
    const auto window = effective_window(params);
    SynthSeries out;
    for (const auto& day : data.days) {
        out.mids.push_back(build_midpoint_series(day.quotes, window));
        if (use_truth) {
            out.signs.push_back(day.truth);
        } else {
            const auto cls = classify_trade_scale(day.trades);
            auto series = aggregate_physical(day.trades, cls, window);
            out.unresolved += series.unresolved;
            out.signs.push_back(std::move(series));
        }
    }
    return out;
}

}  // namespace testutil
