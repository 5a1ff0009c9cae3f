#include "mresp/trade_signs.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "mresp/numeric.hpp"

namespace mresp {

TradeClassification classify_trade_scale(std::span<const TradeEvent> trades_of_day,
                                         std::optional<int> carry_in) {
    if (carry_in && *carry_in != 1 && *carry_in != -1)
        throw std::runtime_error("classify_trade_scale: carry_in must be +1 or -1");

    TradeClassification out;
    out.signs.reserve(trades_of_day.size());

    // Exact price equality on purpose: prices live on a discrete tick grid
    // and survive serialization bit-identically.
    double prev_price = 0.0;
    bool have_prev = false;
    std::int8_t state = carry_in ? static_cast<std::int8_t>(*carry_in) : 0;
    for (const auto& trade : trades_of_day) {
        if (have_prev && trade.price != prev_price)
            state = trade.price > prev_price ? 1 : -1;
        out.signs.push_back(state);
        if (state == 0) ++out.unresolved;
        prev_price = trade.price;
        have_prev = true;
    }
    return out;
}

SignSeries aggregate_physical(std::span<const TradeEvent> trades_of_day,
                              const TradeClassification& classification,
                              const MarketWindow& window) {
    if (trades_of_day.empty())
        throw std::runtime_error("aggregate_physical: empty day");
    if (classification.signs.size() != trades_of_day.size())
        throw std::runtime_error("aggregate_physical: classification size mismatch");
    if (!window.valid())
        throw std::runtime_error("aggregate_physical: invalid window");

    SignSeries out;
    out.day = trades_of_day.front().day;
    out.base_s = window.open_s;
    const auto len = static_cast<std::size_t>(window.length());
    out.n.assign(len, 0);
    out.e.assign(len, 0);
    out.eps_p.assign(len, 0);
    out.unresolved = classification.unresolved;

    for (std::size_t i = 0; i < trades_of_day.size(); ++i) {
        const auto& trade = trades_of_day[i];
        if (!(trade.day == out.day))
            throw std::runtime_error("aggregate_physical: mixed days");
        if (!window.contains(trade.t))
            throw std::runtime_error("aggregate_physical: trade outside window");
        const auto sign = classification.signs[i];
        if (sign == 0) continue;  // unresolved: feeds no estimator
        const auto k = static_cast<std::size_t>(trade.t - window.open_s);
        out.n[k] += 1;
        out.e[k] += sign;
        out.trade_sec.push_back(static_cast<std::int32_t>(k));
        out.trade_sign.push_back(sign);
    }
    for (std::size_t k = 0; k < len; ++k)
        out.eps_p[k] = out.e[k] > 0 ? 1 : out.e[k] < 0 ? -1 : 0;
    return out;
}

SignSeries apply_sign_permutation(const SignSeries& series,
                                  std::span<const std::int32_t> perm) {
    std::vector<std::int32_t> trading;  // seconds with trades, ascending
    for (std::int32_t k = 0; k < series.length(); ++k)
        if (series.n[static_cast<std::size_t>(k)] > 0) trading.push_back(k);
    if (perm.size() != trading.size())
        throw std::runtime_error("apply_sign_permutation: size mismatch");
    std::vector<bool> seen(perm.size(), false);
    for (const auto p : perm) {
        if (p < 0 || static_cast<std::size_t>(p) >= perm.size() ||
            seen[static_cast<std::size_t>(p)])
            throw std::runtime_error("apply_sign_permutation: not a permutation");
        seen[static_cast<std::size_t>(p)] = true;
    }

    // Group boundaries of the per-trade lists, one group per trading second.
    std::vector<std::size_t> group_start(trading.size() + 1, 0);
    {
        std::size_t g = 0;
        for (std::size_t i = 0; i < series.trade_sec.size(); ++i) {
            while (g < trading.size() && trading[g] != series.trade_sec[i]) {
                ++g;
                group_start[g] = i;
            }
        }
        for (std::size_t j = g + 1; j <= trading.size(); ++j)
            group_start[j] = series.trade_sec.size();
    }

    SignSeries out;
    out.day = series.day;
    out.base_s = series.base_s;
    out.unresolved = series.unresolved;
    out.n.assign(series.n.size(), 0);
    out.e.assign(series.e.size(), 0);
    out.eps_p.assign(series.eps_p.size(), 0);
    out.trade_sec.reserve(series.trade_sec.size());
    out.trade_sign.reserve(series.trade_sign.size());

    for (std::size_t i = 0; i < trading.size(); ++i) {
        const auto dst = static_cast<std::size_t>(trading[i]);
        const auto src_idx = static_cast<std::size_t>(perm[i]);
        const auto src = static_cast<std::size_t>(trading[src_idx]);
        out.n[dst] = series.n[src];
        out.e[dst] = series.e[src];
        out.eps_p[dst] = series.eps_p[src];
        for (std::size_t j = group_start[src_idx]; j < group_start[src_idx + 1]; ++j) {
            out.trade_sec.push_back(trading[i]);
            out.trade_sign.push_back(series.trade_sign[j]);
        }
    }
    return out;
}

SignSeries shuffle_signs(const SignSeries& series, std::uint64_t seed) {
    std::int32_t trading = 0;
    for (std::int32_t k = 0; k < series.length(); ++k)
        if (series.n[static_cast<std::size_t>(k)] > 0) ++trading;

    std::vector<std::int32_t> perm(static_cast<std::size_t>(trading));
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(series.day.day_number())));
    for (std::size_t i = perm.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(perm[i - 1], perm[j]);
    }
    return apply_sign_permutation(series, perm);
}

}  // namespace mresp
