#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mresp/events.hpp"

namespace mresp {

// Tick-rule output for one day's trades, parallel to the input order.
// sign is +1/-1, or 0 for leading trades whose price never differed from
// anything seen yet (unresolvable without fabricating a direction).
struct TradeClassification {
    std::vector<std::int8_t> signs;
    std::int64_t unresolved = 0;
};

// Tick rule: sign = sgn(price_n - price_{n-1}) when prices differ, else the
// previous trade's sign (same-direction orders that did not exhaust the
// standing volume leave the price unchanged). carry_in, when present, seeds
// the recursion from the previous day's last resolved sign; without it,
// leading unchanged-price trades stay unresolved and are excluded (and
// counted) rather than guessed.
TradeClassification classify_trade_scale(std::span<const TradeEvent> trades_of_day,
                                         std::optional<int> carry_in = std::nullopt);

// Per-second sign aggregates for one day over the market window, plus the
// resolved per-trade sign list in trade-time order (used by the trade-scale
// estimators and the pseudo-midpoint shift construction).
struct SignSeries {
    Date day;
    std::int32_t base_s = 0;
    std::vector<std::int32_t> n;        // N(t): resolved trades in second t
    std::vector<std::int32_t> e;        // E(t): signed sum of trade signs
    std::vector<std::int8_t> eps_p;     // sgn(E), 0 when N = 0 or balanced
    std::vector<std::int32_t> trade_sec;   // per resolved trade: second offset
    std::vector<std::int8_t> trade_sign;   // per resolved trade: +1/-1
    std::int64_t unresolved = 0;

    std::int32_t length() const { return static_cast<std::int32_t>(n.size()); }
};

// Buckets classified trades by second. Unresolved trades contribute to
// neither N nor E; they are carried in `unresolved` for reporting.
SignSeries aggregate_physical(std::span<const TradeEvent> trades_of_day,
                              const TradeClassification& classification,
                              const MarketWindow& window);

// Reorders per-second aggregates among the trade-bearing seconds of the day
// according to `perm` (a permutation of those seconds' indices in ascending-
// second order). Quiet seconds stay quiet, so the trades/no-trades pattern
// and every per-second invariant survive. Per-trade lists are rebuilt to
// match the moved aggregates.
SignSeries apply_sign_permutation(const SignSeries& series,
                                  std::span<const std::int32_t> perm);

// Seeded within-day shuffle of the per-second signs (identity-free with
// probability 1 - 1/k!; no special casing). Used as the null baseline.
SignSeries shuffle_signs(const SignSeries& series, std::uint64_t seed);

}  // namespace mresp
