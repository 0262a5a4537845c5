#pragma once

#include <cstdint>

namespace privbot {

// Quote-asset amounts and prices are integer cents; a price is cents per one
// whole base-asset unit. Base-asset amounts are integer minor units of 1e-8.
using Cents = std::int64_t;
using BaseUnits = std::int64_t;

inline constexpr std::int64_t kBaseUnitsPerCoin = 100'000'000;
inline constexpr std::int64_t kBpsDenominator = 10'000;

/// Base received for `quote` cents at `price`, with the price worsened by
/// `slippage_bps` against the buyer. Truncates.
BaseUnits base_for_quote(Cents quote, Cents price, std::int64_t slippage_bps = 0);

/// Quote received for `base` units at `price`, worsened by `slippage_bps`
/// against the seller. Truncates.
Cents quote_for_base(BaseUnits base, Cents price, std::int64_t slippage_bps = 0);

/// Fee charged on `amount` at `fees_bps`, truncated.
Cents fee_for(Cents amount, std::int64_t fees_bps);

/// Value of a mixed holding at `price`.
inline Cents mark_to_market(Cents quote, BaseUnits base, Cents price) {
    return quote + quote_for_base(base, price);
}

} // namespace privbot
