#include "privbot/error.hpp"
#include "privbot/strategy.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace privbot;
using namespace privbot::strategy;

namespace {
ParamConfig cfg(std::int64_t u, std::int64_t l) { return {20, 2, u, l}; }
} // namespace

TEST_CASE("worked decisions") {
    CHECK(decide({9800, 20000, 10000}, cfg(0, -1)) == TradeDecision::Buy);
    CHECK(decide({10600, 10000, 5000}, cfg(-1, 0)) == TradeDecision::Sell);
    CHECK(decide({10000, 10000, 10000}, cfg(0, 0)) == TradeDecision::Hold);
    CHECK(decide({9900, 30000, 19900}, cfg(0, 0)) == TradeDecision::Buy);
}

TEST_CASE("thresholds truncate before multiplying") {
    CHECK(buy_threshold(10150, 0) == 10100);
    CHECK(buy_threshold(19900, 0) == 19900);
    CHECK(buy_threshold(10000, -1) == 9900);
    CHECK(sell_threshold(10000, -1) == 10100);
    CHECK(sell_threshold(10099, 30) == 7000);
    // 10100 is below the real-valued threshold 10150 but not the truncated one.
    CHECK(decide({10100, 99999, 10150}, cfg(0, 0)) == TradeDecision::Hold);
    CHECK(decide({10099, 99999, 10150}, cfg(0, 0)) == TradeDecision::Buy);
}

TEST_CASE("buy wins when both rules fire") {
    // lower 1000 with l = 30 buys below 1300; upper 1000 with u = 30 sells above 700.
    CHECK(decide({1000, 1000, 1000}, cfg(30, 30)) == TradeDecision::Buy);
}

TEST_CASE("raising a threshold never cancels a decision") {
    for (Cents price = 100; price <= 30000; price += 137) {
        for (Cents lower = 100; lower <= 30000; lower += 911) {
            const Cents upper = lower + 2000;
            for (std::int64_t t = -1; t < 30; ++t) {
                if (decide({price, upper, lower}, cfg(0, t)) == TradeDecision::Buy)
                    CHECK(decide({price, upper, lower}, cfg(0, t + 1)) == TradeDecision::Buy);
                if (decide({price, upper, lower}, cfg(t, -1)) == TradeDecision::Sell)
                    CHECK(decide({price, upper, lower}, cfg(t + 1, -1)) == TradeDecision::Sell);
            }
        }
    }
}

TEST_CASE("config labels") {
    auto c = ParamConfig::parse("1.1.-1.-1");
    REQUIRE(c);
    CHECK(*c == ParamConfig{1, 1, -1, -1});
    CHECK(c->label() == "1.1.-1.-1");
    CHECK(ParamConfig{20, 6, 14, 14}.label() == "20.6.14.14");
    CHECK(!ParamConfig::parse("1.1.1"));
    CHECK(!ParamConfig::parse("a.b.c.d"));
    CHECK(!ParamConfig::parse("1.1.1.1.1"));
    CHECK(ParamConfig{0, 1, 0, 0}.valid() == false);
    CHECK(ParamConfig{41, 1, 0, 0}.valid() == false);
    CHECK(ParamConfig{1, 7, 0, 0}.valid() == false);
    CHECK(ParamConfig{1, 1, -2, 0}.valid() == false);
    CHECK(ParamConfig{1, 1, 0, 31}.valid() == false);
    CHECK_THROWS_AS((ParamConfig{1, 0, 0, 0}.validated()), Error);
    CHECK(ParamConfig{1, 1, 0, 0} < ParamConfig{1, 1, 0, 1});
}

TEST_CASE("public params validity allows a non-positive lower band") {
    CHECK(PublicParams{100, 200, -50}.valid());
    CHECK(!PublicParams{0, 200, 50}.valid());
    CHECK(!PublicParams{100, 50, 200}.valid());
}
