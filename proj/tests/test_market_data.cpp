#include "privbot/error.hpp"
#include "privbot/market_data.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

using namespace privbot;
using namespace privbot::market;

namespace {

PriceSeries from_closes(std::vector<Cents> closes, std::int64_t period = 60, std::int64_t t0 = 0) {
    std::vector<Candle> candles;
    for (std::size_t i = 0; i < closes.size(); ++i)
        candles.push_back({t0 + static_cast<std::int64_t>(i) * period, closes[i]});
    return PriceSeries("ETH:USDC", period, std::move(candles));
}

PriceSeries parse(const std::string& text, std::int64_t period = 60) {
    std::istringstream in(text);
    return parse_candles(in, "ETH:USDC", period);
}

template <class F>
Errc code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an exception");
    return Errc::InvalidArgument;
}

} // namespace

TEST_CASE("three evenly spaced rows parse") {
    auto s = parse("timestamp,close\n0,1.00\n60,2.00\n120,3.00\n");
    REQUIRE(s.size() == 3);
    CHECK(s[2].close == 300);
    CHECK(s.period_seconds() == 60);
}

TEST_CASE("a gap in the timestamps is reported at the later candle") {
    try {
        parse("timestamp,close\n0,1\n60,1\n180,1\n");
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NonUniformSpacing);
        REQUIRE(e.detail());
        CHECK(*e.detail() == 180);
    }
}

TEST_CASE("csv rejects") {
    CHECK(code_of([] { parse("timestamp,close\n"); }) == Errc::EmptyFile);
    CHECK(code_of([] { parse(""); }) == Errc::EmptyFile);
    CHECK(code_of([] { parse("timestamp,close\n0,1\n60,1\n60,2\n"); }) == Errc::DuplicateTimestamp);
    CHECK(code_of([] { load_candles("/nonexistent/file.csv", "ETH:USDC", 60); }) == Errc::FileNotFound);

    try {
        parse("timestamp,close\n0,1.00\n60,abc\n");
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MalformedRow);
        CHECK(e.detail() == 3);
    }
    CHECK(code_of([] { parse("timestamp,close\n0,1.00,7\n"); }) == Errc::MalformedRow);
    CHECK(code_of([] { parse("timestamp,close\n0,-1.00\n"); }) == Errc::MalformedRow);
    CHECK(code_of([] { parse("timestamp,close\n0,0\n"); }) == Errc::MalformedRow);
    CHECK(code_of([] { parse("time,price\n0,1\n"); }) == Errc::MalformedRow);
}

TEST_CASE("rows are sorted and optional columns kept") {
    auto s = parse("close,volume,timestamp,open\n2,10,60,1.5\n1,5,0,0.5\n");
    REQUIRE(s.size() == 2);
    CHECK(s[0].timestamp == 0);
    CHECK(s[0].close == 100);
    CHECK(s[0].open == 50);
    CHECK(s[1].volume);
    CHECK(!s[1].high);
}

TEST_CASE("decimal prices round half to even") {
    CHECK(parse_price_cents("1.005") == 100);
    CHECK(parse_price_cents("1.015") == 102);
    CHECK(parse_price_cents("1.0051") == 101);
    CHECK(parse_price_cents("2000") == 200000);
    CHECK(parse_price_cents("0.5") == 50);
    CHECK(parse_price_cents(".25") == 25);
    CHECK(!parse_price_cents("1e3"));
    CHECK(!parse_price_cents("-3"));
    CHECK(!parse_price_cents(""));
    CHECK(!parse_price_cents("1.2.3"));
}

TEST_CASE("1-minute fixture has a full day of candles") {
    auto s = load_candles(PRIVBOT_FIXTURE_DIR "/minute_1d.csv", "ETH:USDC", 60);
    CHECK(s.size() == 1440);
}

TEST_CASE("resample keeps the last close of each bucket") {
    SECTION("constant") {
        auto r = resample(from_closes(std::vector<Cents>(60, 500)), 600);
        REQUIRE(r.size() == 6);
        for (const auto& c : r.candles())
            CHECK(c.close == 500);
        CHECK(r.period_seconds() == 600);
    }
    SECTION("1..20") {
        std::vector<Cents> closes;
        for (Cents i = 1; i <= 20; ++i)
            closes.push_back(i);
        auto r = resample(from_closes(closes), 600);
        REQUIRE(r.size() == 2);
        CHECK(r[0].close == 10);
        CHECK(r[1].close == 20);
        CHECK(r[1].timestamp == 600);
    }
    SECTION("trailing partial bucket dropped") {
        CHECK(resample(from_closes(std::vector<Cents>(25, 1)), 600).size() == 2);
    }
    SECTION("same period is the identity") {
        auto s = from_closes({1, 2, 3, 4});
        CHECK(resample(s, 60) == s);
    }
    SECTION("errors") {
        auto s = from_closes({1, 2, 3});
        CHECK(code_of([&] { resample(s, 90); }) == Errc::NotAMultiple);
        CHECK(code_of([&] { resample(s, 0); }) == Errc::NotAMultiple);
        CHECK(code_of([&] { resample(s, 600); }) == Errc::SeriesTooShort);
    }
}

TEST_CASE("period selection") {
    const std::int64_t day = kSecondsPerDay;
    SECTION("strictly decreasing 60 days gives 31 windows") {
        std::vector<Cents> closes;
        for (int i = 0; i <= 60; ++i)
            closes.push_back(100000 - i * 100);
        auto s = from_closes(closes, day);
        auto w = select_periods(s, day);
        REQUIRE(w.size() == 31);
        for (const auto& win : w) {
            CHECK(win.end - win.start == kWindowSeconds);
            auto r = window_indices(s, win);
            CHECK(s[r.last].close < s[r.first].close);
        }
    }
    SECTION("increasing and flat series give nothing") {
        std::vector<Cents> up, flat(40, 7);
        for (int i = 0; i < 40; ++i)
            up.push_back(100 + i);
        CHECK(select_periods(from_closes(up, day), day).empty());
        CHECK(select_periods(from_closes(flat, day), day).empty());
    }
    SECTION("too short") {
        CHECK(code_of([&] { select_periods(from_closes(std::vector<Cents>(30, 5), day), day); }) ==
              Errc::SeriesTooShort);
    }
    SECTION("stride must fit the candle grid") {
        auto s = from_closes(std::vector<Cents>(40, 5), day);
        CHECK(code_of([&] { select_periods(s, day / 2); }) == Errc::InvalidArgument);
    }
}

TEST_CASE("split puts the first half, rounded up, into training") {
    auto make = [](std::size_t n) {
        std::vector<PeriodWindow> w;
        for (std::size_t i = 0; i < n; ++i)
            w.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(i) + kWindowSeconds});
        return w;
    };
    for (auto [n, train] : {std::pair{10u, 5u}, {1u, 1u}, {7u, 4u}}) {
        auto w = make(n);
        auto s = split_periods(w);
        CHECK(s.train.size() == train);
        CHECK(s.test.size() == n - train);
        std::vector<PeriodWindow> joined = s.train;
        joined.insert(joined.end(), s.test.begin(), s.test.end());
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(joined[i].start == w[i].start);
            CHECK(joined[i].role == (i < train ? PeriodRole::Train : PeriodRole::Test));
        }
    }
    CHECK(code_of([] { split_periods({}); }) == Errc::EmptyList);
}

TEST_CASE("series invariants are enforced on construction") {
    CHECK(code_of([] { PriceSeries("X:Y", 60, {}); }) == Errc::EmptyList);
    CHECK(code_of([] { PriceSeries("X:Y", 60, {{0, 0}}); }) == Errc::InvalidArgument);
    CHECK(code_of([] { PriceSeries("X:Y", 60, {{-60, 5}}); }) == Errc::InvalidArgument);
    CHECK(code_of([] { PriceSeries("X:Y", 0, {{0, 1}}); }) == Errc::InvalidArgument);
}

TEST_CASE("random walk is reproducible and csv round-trips") {
    RandomWalkSpec spec;
    spec.count = 200;
    auto a = generate_random_walk(spec);
    auto b = generate_random_walk(spec);
    CHECK(a == b);
    spec.seed = 2;
    CHECK(!(generate_random_walk(spec) == a));

    std::istringstream in(to_csv(a));
    CHECK(parse_candles(in, a.pair(), a.period_seconds()).closes() == a.closes());
}
