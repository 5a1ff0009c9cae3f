#include "mresp/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "mresp/numeric.hpp"

namespace mresp {

void SynthParams::validate() const {
    if (days < 1) throw std::runtime_error("synth: days must be >= 1");
    if (seconds_per_day < 1)
        throw std::runtime_error("synth: seconds_per_day must be >= 1");
    if (!(p_persist >= 0.5 && p_persist < 1.0))
        throw std::runtime_error("synth: p_persist must be in [0.5, 1)");
    if (impact < 0.0 || noise_sigma < 0.0)
        throw std::runtime_error("synth: impact and noise_sigma must be >= 0");
    if (!(tick > 0.0)) throw std::runtime_error("synth: tick must be > 0");
    if (base_spread < 0.0) throw std::runtime_error("synth: base_spread must be >= 0");
    if (!(base_price > 0.0)) throw std::runtime_error("synth: base_price must be > 0");
    if (!window.valid()) throw std::runtime_error("synth: invalid window");
    if (seconds_per_day > window.length())
        throw std::runtime_error("synth: seconds_per_day exceeds window length");
    if (trades_law.kind == TradesLaw::Kind::fixed) {
        if (trades_law.value < 0.0 ||
            trades_law.value != std::floor(trades_law.value))
            throw std::runtime_error("synth: fixed trades law needs an integer count >= 0");
    } else if (!(trades_law.value > 0.0)) {
        throw std::runtime_error("synth: geometric trades law needs mean > 0");
    }
    if (kernel.kind == ImpactKernel::Kind::transient && !(kernel.decay > 0.0))
        throw std::runtime_error("synth: transient decay must be > 0");
}

namespace {

double round_to_tick(double price, double tick) {
    return std::round(price / tick) * tick;
}

}  // namespace

SynthDay generate_day(const SynthParams& params, std::int32_t day_index) {
    params.validate();

    SynthDay out;
    out.day = Date::from_day_number(params.start_day.day_number() + day_index);
    out.truth.day = out.day;
    out.truth.base_s = params.window.open_s;
    const auto len = static_cast<std::size_t>(params.seconds_per_day);
    out.truth.n.assign(len, 0);
    out.truth.e.assign(len, 0);
    out.truth.eps_p.assign(len, 0);

    Rng rng(Rng::mix(params.seed, static_cast<std::uint64_t>(day_index)));

    const double base_ln = std::log(params.base_price);
    const double half_spread = 0.5 * params.base_spread;
    const double decay_factor =
        params.kernel.kind == SynthParams::ImpactKernel::Kind::permanent
            ? 1.0
            : std::exp(-1.0 / params.kernel.decay);

    double impact_state = 0.0;  // sum of (decayed) past trade signs
    double noise_cum = 0.0;
    auto price_ticks =
        static_cast<std::int64_t>(std::llround(params.base_price / params.tick));
    int prev_sign = 0;  // 0 until the day's first trade
    std::int64_t trades_so_far = 0;

    auto emit_quote = [&](std::int32_t t, std::int32_t seq) {
        const double mid =
            std::exp(base_ln + params.impact * impact_state + noise_cum);
        double bid = round_to_tick(mid - half_spread, params.tick);
        double ask = round_to_tick(mid + half_spread, params.tick);
        if (bid <= 0.0) bid = params.tick;
        if (ask < bid) ask = bid;
        out.quotes.push_back(QuoteEvent{
            out.day, t, seq, bid, ask,
            100 * (1 + static_cast<std::int64_t>(rng.below(9))),
            100 * (1 + static_cast<std::int64_t>(rng.below(9)))});
    };

    for (std::int32_t k = 0; k < params.seconds_per_day; ++k) {
        const std::int32_t t = params.window.open_s + k;
        impact_state *= decay_factor;

        std::int64_t n_trades =
            params.trades_law.kind == SynthParams::TradesLaw::Kind::fixed
                ? static_cast<std::int64_t>(params.trades_law.value)
                : rng.geometric(params.trades_law.value);

        for (std::int64_t i = 0; i < n_trades; ++i) {
            int sign;
            if (prev_sign == 0) {
                sign = rng.coin(0.5) ? 1 : -1;
            } else {
                sign = rng.coin(params.p_persist) ? prev_sign : -prev_sign;
            }

            // Price rule keeping the tick rule exact: a sign flip always
            // steps in the new direction; a same-side follow-up either
            // steps or repeats (half of each). The day's first two trades
            // step unconditionally so the price chain anchors after one
            // trade (only the very first is unresolvable).
            const bool must_step =
                trades_so_far < 2 || sign != prev_sign || rng.coin(0.5);
            if (must_step) price_ticks += sign;
            const double price =
                static_cast<double>(price_ticks) * params.tick;
            out.trades.push_back(TradeEvent{
                out.day, t, static_cast<std::int32_t>(i), price,
                100 * (1 + static_cast<std::int64_t>(rng.below(9)))});

            impact_state += sign;
            out.truth.n[static_cast<std::size_t>(k)] += 1;
            out.truth.e[static_cast<std::size_t>(k)] += sign;
            out.truth.trade_sec.push_back(k);
            out.truth.trade_sign.push_back(static_cast<std::int8_t>(sign));

            // Post-trade quote: the impact is visible immediately; the
            // second's noise lands on the end-of-second quote below.
            emit_quote(t, static_cast<std::int32_t>(i));
            prev_sign = sign;
            ++trades_so_far;
        }

        if (params.noise_sigma > 0.0) noise_cum += params.noise_sigma * rng.gauss();
        emit_quote(t, static_cast<std::int32_t>(n_trades));
    }

    for (std::size_t k = 0; k < len; ++k)
        out.truth.eps_p[k] =
            out.truth.e[k] > 0 ? 1 : out.truth.e[k] < 0 ? -1 : 0;
    return out;
}

SynthData generate(const SynthParams& params, int workers) {
    params.validate();
    SynthData out;
    out.days.resize(static_cast<std::size_t>(params.days));
    parallel_for(static_cast<std::size_t>(params.days), workers,
                 [&](std::size_t d) {
                     out.days[d] = generate_day(params, static_cast<std::int32_t>(d));
                 });
    return out;
}

double theoretical_response(const SynthParams& params, std::int32_t tau) {
    params.validate();
    if (tau < 1) throw std::runtime_error("theoretical_response: tau must be >= 1");
    if (params.trades_law.kind != SynthParams::TradesLaw::Kind::fixed ||
        params.trades_law.value != 1.0)
        throw std::runtime_error(
            "theoretical_response: defined for one trade per second only");

    const double rho = 2.0 * params.p_persist - 1.0;
    if (params.kernel.kind == SynthParams::ImpactKernel::Kind::permanent) {
        // impact * sum_{k=0}^{tau-1} rho^k, the sign-autocorrelation sum.
        return params.impact * (1.0 - std::pow(rho, static_cast<double>(tau))) /
               (1.0 - rho);
    }

    // Transient kernel: E[R(tau)] = impact * (A - B) with
    //   A = sum_{v <= tau-1} exp(-(tau-1-v)/deacy) * rho^|v|
    //   B = sum_{v <= -1}    exp(-(-1-v)/decay)    * rho^|v|
    // where v indexes trade seconds relative to the sign's second. Truncated
    // once both factors are negligible; summed small-to-large.
    const double ell = params.kernel.decay;
    const std::int64_t horizon =
        tau + static_cast<std::int64_t>(std::ceil(80.0 * ell)) + 64;
    long double a_sum = 0.0L, b_sum = 0.0L;
    for (std::int64_t v = -horizon; v <= tau - 1; ++v) {
        const double av = std::fabs(static_cast<double>(v));
        const double corr = rho == 0.0 ? (v == 0 ? 1.0 : 0.0) : std::pow(rho, av);
        a_sum += static_cast<long double>(
            std::exp(-static_cast<double>(tau - 1 - v) / ell) * corr);
        if (v <= -1)
            b_sum += static_cast<long double>(
                std::exp(-static_cast<double>(-1 - v) / ell) * corr);
    }
    return params.impact * static_cast<double>(a_sum - b_sum);
}

}  // namespace mresp
