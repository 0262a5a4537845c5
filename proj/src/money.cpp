#include "privbot/money.hpp"

#include "privbot/error.hpp"

#include <limits>

namespace privbot {
namespace {

std::int64_t narrow(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw Error(Errc::InvalidArgument, "amount overflows 64-bit range");
    return static_cast<std::int64_t>(v);
}

} // namespace

BaseUnits base_for_quote(Cents quote, Cents price, std::int64_t slippage_bps) {
    if (price <= 0)
        throw Error(Errc::InvalidArgument, "price must be positive");
    if (slippage_bps < 0 || slippage_bps >= kBpsDenominator)
        throw Error(Errc::InvalidArgument, "slippage must be in [0, 10000) bps");
    const __int128 num = static_cast<__int128>(quote) * kBaseUnitsPerCoin * kBpsDenominator;
    const __int128 den = static_cast<__int128>(price) * (kBpsDenominator + slippage_bps);
    return narrow(num / den);
}

Cents quote_for_base(BaseUnits base, Cents price, std::int64_t slippage_bps) {
    if (price <= 0)
        throw Error(Errc::InvalidArgument, "price must be positive");
    if (slippage_bps < 0 || slippage_bps >= kBpsDenominator)
        throw Error(Errc::InvalidArgument, "slippage must be in [0, 10000) bps");
    const __int128 num = static_cast<__int128>(base) * price * (kBpsDenominator - slippage_bps);
    const __int128 den = static_cast<__int128>(kBaseUnitsPerCoin) * kBpsDenominator;
    return narrow(num / den);
}

Cents fee_for(Cents amount, std::int64_t fees_bps) {
    if (fees_bps < 0 || fees_bps > kBpsDenominator)
        throw Error(Errc::InvalidArgument, "fees must be in [0, 10000] bps");
    return narrow(static_cast<__int128>(amount) * fees_bps / kBpsDenominator);
}

} // namespace privbot
