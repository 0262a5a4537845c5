// Standalone acceptance run: one PASS/FAIL line per criterion, nonzero exit
// if any fails.

#include "oracles.hpp"

#include "privbot/chain_sim.hpp"
#include "privbot/dex_sim.hpp"
#include "privbot/error.hpp"
#include "privbot/indicators.hpp"
#include "privbot/market_data.hpp"
#include "privbot/orchestrator.hpp"
#include "privbot/strategy.hpp"
#include "privbot/training.hpp"
#include "privbot/zkproof.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace privbot;
using strategy::ParamConfig;
using strategy::PublicParams;
using strategy::TradeDecision;

namespace {

const std::filesystem::path kFixtures = PRIVBOT_FIXTURE_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass)
        ++failures;
    std::printf("%s %2d %-28s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
    std::fflush(stdout);
}

template <typename... A>
std::string fmt(const char* f, A... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

market::PriceSeries series_of(const std::vector<Cents>& closes, std::int64_t period) {
    std::vector<market::Candle> candles;
    for (std::size_t i = 0; i < closes.size(); ++i)
        candles.push_back({static_cast<std::int64_t>(i) * period, closes[i]});
    return market::PriceSeries("ETH:USDC", period, std::move(candles));
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome grid_cardinality() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto configs = training::enumerate_configs(training::GridSpace::full_range());
    const double secs = elapsed_since(t0);
    std::set<std::string> labels;
    for (const auto& c : configs)
        labels.insert(c.label());
    const bool ok = configs.size() == 81 && labels.size() == 81 && labels.count("20.6.14.14") &&
                    labels.count("1.1.-1.-1") && secs < 1.0;
    return {ok, fmt("%zu configs, %zu distinct, %.4f s", configs.size(), labels.size(), secs)};
}

Outcome indicator_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    std::size_t checks = 0, mismatches = 0;
    for (int trial = 0; trial < 10'000; ++trial) {
        const auto len = std::uniform_int_distribution<std::size_t>(1, 32)(rng);
        const auto top = std::uniform_int_distribution<int>(0, 2)(rng) == 0 ? 1'000'000 : 1'000;
        std::uniform_int_distribution<Cents> price(1, top);
        std::vector<Cents> closes(len);
        for (auto& c : closes)
            c = price(rng);
        const auto s = series_of(closes, 600);
        const auto n = std::uniform_int_distribution<std::size_t>(1, len)(rng);
        const auto d = std::uniform_int_distribution<std::int64_t>(0, 6)(rng);
        for (std::size_t at = n - 1; at < len; ++at) {
            const auto expect = oracle::bands(closes, at, n, d);
            const auto ts = static_cast<std::int64_t>(at) * 600;
            const auto m = indicators::window_moments(std::span(closes).subspan(at + 1 - n, n));
            const auto b = indicators::bollinger(s, ts, n, d);
            ++checks;
            if (indicators::sma(s, ts, n) != expect.sma || m.mean != expect.sma || m.stddev != expect.stddev ||
                b.sma != expect.sma || b.upper != expect.upper || b.lower != expect.lower)
                ++mismatches;
        }
    }
    const double secs = elapsed_since(t0);
    return {mismatches == 0 && secs < 30.0, fmt("%zu windows, %zu mismatches", checks, mismatches)};
}

Outcome circuit_agreement() {
    const std::int64_t pcts[] = {-1, 0, 14, 30};
    std::size_t tuples = 0, mismatches = 0;
    for (std::int64_t pi = 1; pi <= 300; ++pi)
        for (std::int64_t li = 1; li <= 300; ++li)
            for (std::int64_t ui : {li, std::min<std::int64_t>(li + 10, 300), std::int64_t{300}}) {
                const PublicParams p{pi * 100, ui * 100, li * 100};
                for (auto u : pcts)
                    for (auto l : pcts) {
                        const ParamConfig c{20, 2, u, l};
                        const auto dec = strategy::decide(p, c);
                        const bool buy_ok = zkproof::circuit_eval(p, {1, l});
                        const bool sell_ok = zkproof::circuit_eval(p, {0, u});
                        bool agree = false;
                        switch (dec) {
                        case TradeDecision::Buy: agree = buy_ok; break;
                        case TradeDecision::Sell: agree = sell_ok && !buy_ok; break;
                        case TradeDecision::Hold: agree = !buy_ok && !sell_ok; break;
                        }
                        ++tuples;
                        if (!agree)
                            ++mismatches;
                    }
            }
    return {mismatches == 0, fmt("%zu tuples, %zu mismatches", tuples, mismatches)};
}

Outcome proof_properties() {
    const auto keys = zkproof::setup("acceptance");
    zkproof::NonceSource nonces(17);
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<Cents> cents(100, 1'000'000);
    std::uniform_int_distribution<std::int64_t> pct(-1, 30);

    std::vector<zkproof::Proof> valid;
    std::size_t verified = 0;
    while (valid.size() < 1'000) {
        const PublicParams p{cents(rng), cents(rng), cents(rng)};
        const zkproof::Witness w{static_cast<std::int8_t>(rng() & 1), pct(rng)};
        if (!zkproof::circuit_eval(p, w))
            continue;
        valid.push_back(zkproof::prove(keys.proving_key, p, w, nonces.next()));
        verified += zkproof::verify(keys.verification_key, valid.back());
    }

    // Every byte of the serialization is covered by one field or another, so
    // flipping any single byte is a single-field mutation.
    std::size_t mutated = 0, accepted = 0;
    for (int i = 0; i < 10'000; ++i) {
        auto bytes = valid[static_cast<std::size_t>(i) % valid.size()].serialize();
        const auto pos = static_cast<std::size_t>(rng() % bytes.size());
        bytes[pos] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
        ++mutated;
        accepted += zkproof::verify(keys.verification_key, bytes);
    }

    const PublicParams shared{10'000, 10'000, 10'000};
    std::vector<zkproof::LabeledProof> labeled;
    for (int i = 0; i < 200; ++i) {
        labeled.push_back({zkproof::prove(keys.proving_key, shared, {1, 5}, nonces.next()), true});
        labeled.push_back({zkproof::prove(keys.proving_key, shared, {0, 5}, nonces.next()), false});
    }
    const auto audit = zkproof::leak_audit(labeled);
    const bool ok = verified == valid.size() && accepted == 0 && audit.passed();
    return {ok, fmt("completeness %zu/%zu, mutations accepted %zu/%zu, leak audit %s", verified, valid.size(),
                    accepted, mutated, audit.passed() ? "clean" : "FAILED")};
}

Outcome gas_reproduction() {
    const auto feed = series_of({200'000, 200'000, 200'000, 160'000}, 600);
    chain::ChainConfig quiet;
    quiet.jitter = false;
    chain::Chain c(feed, quiet);
    const auto keys = zkproof::setup("gas");
    c.deploy_verifier(keys.verification_key);
    const auto p = c.get_public_params(1, 1800, 3, 1);
    const zkproof::Witness w{1, 0};
    if (!zkproof::circuit_eval(p, w))
        return {false, "fixture round does not buy"};
    const auto proof = zkproof::prove(keys.proving_key, p, w, zkproof::Nonce{});
    const bool verified = c.verify_and_check(1, proof, p, 1800);
    const auto total = c.ledger().total_gas();
    const double usd = c.config().gas.usd_for_gas(total);

    chain::ChainConfig noisy;
    noisy.jitter_seed = 99;
    chain::Chain j(feed, noisy);
    j.deploy_verifier(keys.verification_key);
    for (std::uint64_t r = 0; r < 1'000; ++r)
        j.verify_and_check(r, proof, p, 1800);
    const double mean = static_cast<double>(j.ledger().total_gas(chain::Contract::Verifier)) / 1'000.0;
    const double rel = std::abs(mean - 191'687.0) / 191'687.0;
    const bool ok = verified && total == 473'402 && std::abs(usd - 150.0) <= 1.0 && rel <= 0.01;
    return {ok, fmt("round %lld gas, $%.2f; jittered verifier mean %.1f (%.3f%%)", static_cast<long long>(total), usd,
                    mean, rel * 100)};
}

Outcome economics() {
    std::vector<chain::Subscription> subs;
    for (int i = 0; i < 1'000; ++i)
        subs.push_back({"user-" + std::to_string(i), 100'000});
    chain::GasLedger ledger;
    const chain::GasSchedule schedule;
    for (std::uint64_t r = 1; r <= 20; ++r) {
        ledger.append({r, chain::Contract::BotContract, schedule.public_params_gas, 0, 0});
        ledger.append({r, chain::Contract::Verifier, schedule.verifier_gas_mean, 0, 0});
    }
    const Cents final_pool = Cents{100'000'000} * 1105 / 1000;
    const auto s = chain::settle_epoch(subs, final_pool, ledger, schedule);
    bool gross_ok = true, gas_ok = true;
    Cents min_gas = s.users.front().gas_share, max_gas = min_gas;
    for (const auto& u : s.users) {
        gross_ok = gross_ok && u.gross_earnings == 10'500;
        gas_ok = gas_ok && std::abs(u.gas_share - 300) <= 1;
        min_gas = std::min(min_gas, u.gas_share);
        max_gas = std::max(max_gas, u.gas_share);
    }
    return {gross_ok && gas_ok && s.users.size() == 1'000,
            fmt("gross $%.2f per user, gas share %lld..%lld cents", s.users.front().gross_earnings / 100.0,
                static_cast<long long>(min_gas), static_cast<long long>(max_gas))};
}

Outcome latency_model() {
    // Saw-tooth feed that dips hard every third candle so 2.1.1.1 trades often.
    std::vector<Cents> closes;
    for (int i = 0; i < 1'100; ++i)
        closes.push_back(i % 3 == 0 ? 180'000 : (i % 3 == 1 ? 220'000 : 200'000));
    orchestrator::EpochConfig e;
    e.config = {2, 1, 1, 1};
    e.rounds = 1'000;
    e.users = 10;
    e.simulation.seed = 5;
    e.simulation.chain.jitter_seed = 6;
    e.simulation.chain.latency_seed = 7;
    const auto r = orchestrator::run_epoch(series_of(closes, 600), e);
    const chain::LatencyModel model;

    bool ok = r.trades >= 100;
    std::ostringstream detail;
    detail << r.trades << " trades;";
    for (auto phase : chain::kAllPhases) {
        const auto& samples = r.phase_samples.at(phase);
        const auto& spec = model.get(phase);
        const auto sum = orchestrator::summarize(samples);
        bool mean_ok;
        if (phase == chain::Phase::ProofGeneration)
            mean_ok = sum.mean >= 0.2 && sum.mean <= 0.8;
        else
            mean_ok = std::abs(sum.mean - spec.mean) <= 0.10 * spec.mean;
        const bool bounds_ok = sum.min >= spec.min && sum.max <= spec.max;
        ok = ok && mean_ok && bounds_ok && !samples.empty();
        detail << ' ' << chain::phase_name(phase) << fmt(" %.2f", sum.mean);
    }
    const auto e2e = orchestrator::summarize(r.end_to_end_samples);
    ok = ok && std::abs(e2e.mean - 48.4) <= 0.10 * 48.4;
    detail << fmt("; end-to-end %.2f", e2e.mean);
    return {ok, detail.str()};
}

Outcome conformance() {
    market::RandomWalkSpec spec;
    spec.seed = 808;
    spec.count = 1'200;
    spec.start_price = 200'000;
    spec.vol_per_step = 0.02;
    const auto feed = market::generate_random_walk(spec);
    orchestrator::Simulation sim(feed);
    sim.subscribe("user-0", 5'000'000);

    std::mt19937_64 rng(4242);
    const auto configs = training::enumerate_configs(training::GridSpace::full_range());
    const orchestrator::Tamper faults[] = {orchestrator::Tamper::Price, orchestrator::Tamper::Upper,
                                           orchestrator::Tamper::Lower, orchestrator::Tamper::Commitment,
                                           orchestrator::Tamper::Tag};
    std::size_t passed = 0, swaps = 0, tampered = 0, tamper_caught = 0;
    for (std::uint64_t round = 1; round <= 1'000; ++round) {
        auto c = configs[rng() % configs.size()];
        c.n = std::min<std::int64_t>(c.n, 5); // keep most rounds close enough to the bands to trade
        c.d = 1;
        const auto t = feed.candles()[static_cast<std::size_t>(round + 100)].timestamp;
        const bool inject = rng() % 4 == 0;
        const auto fault = inject ? faults[rng() % 5] : orchestrator::Tamper::None;
        const auto trace = sim.run_round(round, t, c, fault);
        passed += orchestrator::conformance_check(trace);
        swaps += trace.swapped();
        const bool proved = std::any_of(trace.messages.begin(), trace.messages.end(),
                                        [](const auto& m) { return m.kind == orchestrator::MessageKind::Prove; });
        if (inject && proved) {
            ++tampered;
            tamper_caught += trace.aborted() && !trace.swapped();
        }
    }
    const bool ok = passed == 1'000 && tampered > 0 && tamper_caught == tampered && swaps > 0 && sim.dex().conserved();
    return {ok, fmt("%zu/1000 conform, %zu swaps, %zu/%zu tampered rounds aborted", passed, swaps, tamper_caught,
                    tampered)};
}

void collect_numbers(const nlohmann::json& j, std::set<std::int64_t>& out) {
    if (j.is_number_integer())
        out.insert(j.get<std::int64_t>());
    else if (j.is_structured())
        for (const auto& v : j)
            collect_numbers(v, out);
}

Outcome dex_privacy() {
    dex::Dex d("ETH", "USDC");
    std::size_t ops = 0, violations = 0;
    const auto step = [&](const std::function<void()>& op) {
        op();
        ++ops;
        if (!d.conserved())
            ++violations;
    };
    step([&] { d.deposit(d.liquidity_provider(), "USDC", 900'000'000'000); });
    step([&] { d.deposit(d.liquidity_provider(), "ETH", 900'000'000'000); });
    const char* users[] = {"alpha", "bravo", "charlie"};
    for (auto* u : users)
        step([&] { d.deposit(u, "USDC", 5'000'000); });

    std::mt19937_64 rng(77);
    std::vector<std::int64_t> secret;
    std::vector<std::size_t> events_before;
    bool events_stable = true;
    for (int i = 0; i < 60; ++i) {
        const std::string user = users[i % 3];
        const auto before = d.observer_view().events.size();
        const Cents price = 150'000 + static_cast<Cents>(rng() % 100'000);
        const bool buy = d.balance(user, "ETH") < 1'000'000;
        const std::string asset = buy ? "USDC" : "ETH";
        const auto amount = d.balance(user, asset) - static_cast<std::int64_t>(rng() % 1'000);
        if (amount <= 0)
            continue;
        step([&] {
            const auto r = d.swap(user, asset, amount, price);
            secret.push_back(amount);
            secret.push_back(r.receive_amount);
            secret.push_back(price);
        });
        events_stable = events_stable && d.observer_view().events.size() == before;
    }
    for (auto* u : users)
        if (const auto q = d.balance(u, "USDC"); q > 0)
            step([&] { d.withdraw(u, "USDC", q); });

    const auto view = d.observer_view().to_json();
    std::set<std::int64_t> public_numbers;
    collect_numbers(view, public_numbers);
    std::size_t leaked = 0;
    for (auto n : secret)
        leaked += public_numbers.count(n);
    const auto text = view.dump();
    std::size_t words = 0;
    for (const char* w : {"swap", "order", "maker", "taker", "receive", "give", "buy", "sell", "price"})
        words += text.find(w) != std::string::npos;
    const bool ok = violations == 0 && leaked == 0 && words == 0 && events_stable &&
                    d.observer_view().commitments.size() == secret.size() / 3;
    return {ok, fmt("%zu ops, %zu conservation violations, %zu leaked values, %zu trade words", ops, violations,
                    leaked, words)};
}

Outcome desk_scale_substitute() {
    const auto series = market::load_candles(kFixtures / "walk_10m.csv", "ETH:USDC", 600);
    const auto split = market::split_periods(market::select_periods(series));
    const std::size_t losing = split.train.size() + split.test.size();

    training::TrainOptions opts;
    opts.method = training::RankMethod::AverageReturn;
    const auto configs = training::enumerate_configs(opts.space);
    const auto all = training::grid_returns(series, configs, split.train, opts.backtest, 0);
    double best = -1e300;
    for (const auto& cr : all)
        best = std::max(best, training::sample_stats(cr.returns).mean);
    const auto report = training::train(series, split.train, opts);
    const double top = report.rows.front().stats.mean;
    std::size_t ties = 0;
    for (const auto& cr : all)
        ties += training::sample_stats(cr.returns).mean == best;
    const bool argmax = top == best;

    auto single = opts;
    single.threads = 1;
    const bool deterministic = training::to_json(training::train(series, split.train, single)).dump() ==
                                   training::to_json(report).dump() &&
                               training::to_json(training::train(series, split.train, opts)).dump() ==
                                   training::to_json(report).dump();

    orchestrator::EpochConfig e;
    e.config = *report.rows.front().config;
    e.rounds = 200;
    e.users = 50;
    const bool epochs_repeat = orchestrator::run_epoch(series, e).to_json() == orchestrator::run_epoch(series, e).to_json();

    // Hand-simulated: buy 1.25 coins at 80.00, sell them at 120.00.
    const auto six = market::load_candles(kFixtures / "six_candles.csv", "ETH:USDC", 518'400);
    const market::PeriodWindow w{0, market::kWindowSeconds, market::PeriodRole::Train};
    const auto r = training::backtest(six, w, {3, 1, 0, 0}, 0, 100'000);
    const auto hold = training::buy_and_hold(six, w, 100'000);
    const bool six_ok = r.end_balance == 150'000 && r.trade_count == 2 && hold.end_balance == 120'000 &&
                        training::relative_return(r, hold) == 30.0;

    const bool ok = losing >= 10 && argmax && deterministic && epochs_repeat && six_ok;
    return {ok, fmt("%zu losing windows, top %s mean %.4f = max %.4f (%zu at max), deterministic %s/%s, six-candle %s",
                    losing, report.rows.front().label().c_str(), top, best, ties, deterministic ? "yes" : "no",
                    epochs_repeat ? "yes" : "no", six_ok ? "exact" : "MISMATCH")};
}

} // namespace

int main() {
    criterion(1, "grid cardinality", grid_cardinality);
    criterion(2, "indicator oracle", indicator_oracle);
    criterion(3, "circuit agreement", circuit_agreement);
    criterion(4, "proof properties", proof_properties);
    criterion(5, "gas reproduction", gas_reproduction);
    criterion(6, "economics", economics);
    criterion(7, "latency model", latency_model);
    criterion(8, "protocol conformance", conformance);
    criterion(9, "dex privacy/conservation", dex_privacy);
    criterion(10, "desk-scale substitute", desk_scale_substitute);
    std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
