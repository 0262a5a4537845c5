#include "privbot/dex_sim.hpp"
#include "privbot/error.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace privbot;
using namespace privbot::dex;

namespace {

constexpr Cents kFloatQuote = 1'000'000'000'000;
constexpr BaseUnits kFloatBase = 1'000'000'000'000;

Dex funded(std::int64_t slippage = 0) {
    Dex d("ETH", "USDC", slippage);
    d.deposit(d.liquidity_provider(), "USDC", kFloatQuote);
    d.deposit(d.liquidity_provider(), "ETH", kFloatBase);
    return d;
}

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an exception");
    return Errc::InvalidArgument;
}

} // namespace

TEST_CASE("deposits") {
    Dex d("ETH", "USDC");
    CHECK(d.observer_view().events.empty());
    CHECK(d.observer_view().commitments.empty());
    auto id = d.deposit("alice", "USDC", 100'000);
    CHECK(d.balance("alice", "USDC") == 100'000);
    CHECK(d.deposit("alice", "USDC", 5) == id);
    CHECK(d.balance("alice", "USDC") == 100'005);
    CHECK(d.deposit("alice", "ETH", 5) != id);
    auto view = d.observer_view();
    REQUIRE(view.events.size() == 3);
    CHECK(view.events[0] == PublicEvent{EventKind::Deposit, "alice", "USDC", 100'000});
    CHECK(code_of([&] { d.deposit("alice", "USDC", 0); }) == Errc::ZeroAmount);
    CHECK(code_of([&] { d.deposit("alice", "DOGE", 1); }) == Errc::UnknownAsset);
    CHECK(d.conserved());
}

TEST_CASE("swaps settle at the given price") {
    auto d = funded();
    d.deposit("bot", "USDC", 100'000);
    auto r = d.swap("bot", "USDC", 100'000, 200'000);
    CHECK(r.receive_amount == kBaseUnitsPerCoin / 2);
    CHECK(d.balance("bot", "ETH") == kBaseUnitsPerCoin / 2);
    CHECK(d.balance("bot", "USDC") == 0);
    CHECK(r.commitment.sequence == 1);
    CHECK(r.commitment.state_root == d.state_root());
    CHECK(d.conserved());

    auto back = d.swap("bot", "ETH", kBaseUnitsPerCoin / 2, 300'000);
    CHECK(back.receive_amount == 150'000);
    CHECK(d.conserved());
    CHECK(d.sequencer_log().size() == 2);
}

TEST_CASE("slippage works against the taker") {
    auto d = funded(50);
    d.deposit("bot", "USDC", 201'000);
    // 50 bps on 2000.00 makes the effective price 2010.00.
    CHECK(d.swap("bot", "USDC", 201'000, 200'000).receive_amount == kBaseUnitsPerCoin);
    auto sell = d.swap("bot", "ETH", kBaseUnitsPerCoin, 200'000);
    CHECK(sell.receive_amount == 199'000);
    CHECK(d.swap("bot", "USDC", 199'000, 200'000, 0).receive_amount == 99'500'000);
}

TEST_CASE("swap and withdraw errors") {
    auto d = funded();
    d.deposit("bot", "USDC", 1000);
    CHECK(code_of([&] { d.swap("bot", "USDC", 1001, 100); }) == Errc::InsufficientBalance);
    CHECK(code_of([&] { d.swap("bot", "USDC", 0, 100); }) == Errc::ZeroAmount);
    CHECK(code_of([&] { d.swap("bot", "BTC", 1, 100); }) == Errc::UnknownAsset);
    CHECK(code_of([&] { d.swap("bot", "USDC", 10, 0); }) == Errc::InvalidArgument);
    CHECK(code_of([&] { d.swap(d.liquidity_provider(), "USDC", 10, 100); }) == Errc::InvalidArgument);
    CHECK(code_of([&] { d.withdraw("bot", "USDC", 1001); }) == Errc::InsufficientBalance);

    Dex dry("ETH", "USDC");
    dry.deposit("bot", "USDC", 1000);
    CHECK(code_of([&] { dry.swap("bot", "USDC", 1000, 100); }) == Errc::InsufficientLiquidity);
    CHECK(dry.conserved());
}

TEST_CASE("withdrawals") {
    auto d = funded();
    d.deposit("bob", "USDC", 500);
    auto r = d.withdraw("bob", "USDC", 500);
    CHECK(r.remaining == 0);
    CHECK(d.balance("bob", "USDC") == 0);
    auto view = d.observer_view();
    CHECK(view.events.back() == PublicEvent{EventKind::Withdrawal, "bob", "USDC", 500});
    CHECK(d.withdrawn("USDC") == 500);
    CHECK(d.conserved());
}

TEST_CASE("observer view holds no trade data") {
    // Trade sizes chosen so that no deposit or withdrawal shares their digits.
    struct Step {
        const char* asset;
        std::int64_t amount;
        Cents price;
    };
    const Step script[] = {{"USDC", 73'311, 187'219}, {"ETH", 21'000'017, 190'007}, {"USDC", 41'113, 188'883}};

    auto d = funded();
    d.deposit("bot", "USDC", 900'000);
    CHECK(d.conserved());
    std::vector<std::int64_t> secret_numbers;
    for (const auto& s : script) {
        const auto before = d.observer_view();
        auto r = d.swap("bot", s.asset, s.amount, s.price);
        CHECK(d.conserved());
        secret_numbers.push_back(s.amount);
        secret_numbers.push_back(r.receive_amount);
        const auto after = d.observer_view();
        CHECK(after.events == before.events);
        CHECK(after.commitments.size() == before.commitments.size() + 1);
    }
    d.withdraw("bot", "USDC", 600'000);
    CHECK(d.conserved());

    const auto text = d.observer_view().to_json().dump();
    for (auto n : secret_numbers) {
        INFO(n);
        CHECK(text.find(std::to_string(n)) == std::string::npos);
    }
    for (const char* word : {"swap", "order", "maker", "taker", "give", "receive", "buy", "sell", "price"})
        CHECK(text.find(word) == std::string::npos);
    CHECK(d.observer_view().commitments.size() == 3);
}

TEST_CASE("commitments are deterministic and sensitive") {
    auto run = [](std::int64_t second_amount) {
        auto d = funded();
        d.deposit("bot", "USDC", 900'000);
        d.swap("bot", "USDC", 100'000, 200'000);
        d.swap("bot", "USDC", second_amount, 210'000);
        return d.observer_view();
    };
    auto a = run(50'000);
    auto b = run(50'000);
    auto c = run(50'001);
    CHECK(a.commitments == b.commitments);
    CHECK(a.events == c.events);
    CHECK(a.commitments[0] == c.commitments[0]);
    CHECK(a.commitments[1].state_root != c.commitments[1].state_root);
}

TEST_CASE("merkle root") {
    std::vector<Vault> v{{0, "a", "X", 1}, {1, "b", "X", 2}, {2, "c", "Y", 3}};
    auto r = merkle_root(v);
    auto again = merkle_root(v);
    CHECK(r == again);
    v[2].balance = 4;
    CHECK(merkle_root(v) != r);
    CHECK(merkle_root({}) == merkle_root({}));
}
