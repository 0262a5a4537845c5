#include "privbot/strategy.hpp"

#include "privbot/error.hpp"

#include <charconv>
#include <vector>

namespace privbot::strategy {

bool ParamConfig::valid() const noexcept {
    return n >= kMinN && n <= kMaxN && d >= kMinD && d <= kMaxD && u >= kMinPct && u <= kMaxPct && l >= kMinPct &&
           l <= kMaxPct;
}

const ParamConfig& ParamConfig::validated() const {
    if (!valid())
        throw Error(Errc::InvalidArgument, "parameter config " + label() + " is out of range");
    return *this;
}

std::string ParamConfig::label() const {
    return std::to_string(n) + "." + std::to_string(d) + "." + std::to_string(u) + "." + std::to_string(l);
}

std::optional<ParamConfig> ParamConfig::parse(std::string_view label) {
    // Split on '.' that follows a digit, so "-1" stays one token.
    std::vector<std::int64_t> parts;
    std::size_t pos = 0;
    while (pos <= label.size()) {
        auto dot = label.find('.', pos + (pos < label.size() && label[pos] == '-' ? 1 : 0));
        if (dot == std::string_view::npos)
            dot = label.size();
        const auto token = label.substr(pos, dot - pos);
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
            return std::nullopt;
        parts.push_back(v);
        pos = dot + 1;
    }
    if (parts.size() != 4)
        return std::nullopt;
    ParamConfig c{parts[0], parts[1], parts[2], parts[3]};
    if (!c.valid())
        return std::nullopt;
    return c;
}

std::string_view decision_name(TradeDecision d) noexcept {
    switch (d) {
    case TradeDecision::Buy: return "buy";
    case TradeDecision::Sell: return "sell";
    case TradeDecision::Hold: return "hold";
    }
    return "hold";
}

Cents buy_threshold(Cents lower, std::int64_t pct) noexcept { return (lower / 100) * (100 + pct); }

Cents sell_threshold(Cents upper, std::int64_t pct) noexcept { return (upper / 100) * (100 - pct); }

TradeDecision decide(const PublicParams& p, const ParamConfig& c) noexcept {
    if (p.price < buy_threshold(p.lower, c.l))
        return TradeDecision::Buy;
    if (p.price > sell_threshold(p.upper, c.u))
        return TradeDecision::Sell;
    return TradeDecision::Hold;
}

} // namespace privbot::strategy
