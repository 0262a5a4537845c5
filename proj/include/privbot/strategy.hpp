#pragma once

#include "privbot/money.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace privbot::strategy {

/// Trained Bollinger parameters: moving-average length, band width in
/// standard deviations, and the sell/buy threshold percentages.
struct ParamConfig {
    std::int64_t n = 20;
    std::int64_t d = 2;
    std::int64_t u = 0;
    std::int64_t l = 0;

    static constexpr std::int64_t kMinN = 1, kMaxN = 40;
    static constexpr std::int64_t kMinD = 1, kMaxD = 6;
    static constexpr std::int64_t kMinPct = -1, kMaxPct = 30;

    bool valid() const noexcept;
    /// Throws InvalidArgument when out of range.
    const ParamConfig& validated() const;

    /// "n.d.u.l", e.g. "20.6.14.14".
    std::string label() const;
    static std::optional<ParamConfig> parse(std::string_view label);

    friend auto operator<=>(const ParamConfig&, const ParamConfig&) = default;
};

/// Inputs the on-chain side can recompute and check.
struct PublicParams {
    Cents price = 0;
    Cents upper = 0;
    Cents lower = 0;

    // The lower band may be zero or negative when d * stddev exceeds the mean;
    // the threshold is then non-positive and a buy can never fire.
    bool valid() const noexcept { return price > 0 && upper >= lower; }

    friend bool operator==(const PublicParams&, const PublicParams&) = default;
};

enum class TradeDecision { Buy, Sell, Hold };

std::string_view decision_name(TradeDecision d) noexcept;

/// (lower / 100) * (100 + pct) with truncating division first.
Cents buy_threshold(Cents lower, std::int64_t pct) noexcept;
/// (upper / 100) * (100 - pct) with truncating division first.
Cents sell_threshold(Cents upper, std::int64_t pct) noexcept;

/// Buy if price < buy_threshold(lower, l); otherwise Sell if
/// price > sell_threshold(upper, u); otherwise Hold.
TradeDecision decide(const PublicParams& p, const ParamConfig& c) noexcept;

} // namespace privbot::strategy
