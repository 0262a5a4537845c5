#pragma once

#include "privbot/chain_sim.hpp"
#include "privbot/dex_sim.hpp"
#include "privbot/market_data.hpp"
#include "privbot/strategy.hpp"
#include "privbot/zkproof.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace privbot::orchestrator {

using strategy::ParamConfig;
using strategy::PublicParams;

enum class MessageKind { GetPublicParams, Decide, Prove, SubmitProof, PublicParamCheck, VerifyResult, Swap, Abort };
std::string_view message_name(MessageKind k) noexcept;

struct Message {
    MessageKind kind = MessageKind::Abort;
    std::optional<PublicParams> params; // GetPublicParams
    std::optional<bool> ok;             // PublicParamCheck, VerifyResult
    std::optional<std::int64_t> gas;    // GetPublicParams, VerifyResult
    std::optional<double> seconds;      // GetPublicParams, Prove, VerifyResult, Swap
    std::string digest_hex;             // Swap
    std::string reason;                 // Abort
};

struct TradeRoundTrace {
    std::uint64_t round = 0;
    std::int64_t timestamp = 0;
    std::vector<Message> messages;
    std::vector<std::pair<chain::Phase, double>> latencies;
    std::vector<chain::GasEntry> gas;
    /// Known to the off-chain bot only; never serialized.
    std::optional<strategy::TradeDecision> decision;

    bool swapped() const noexcept;
    bool aborted() const noexcept;
    double end_to_end_seconds() const noexcept;
};

/// One JSON object per message, in order. The decision never appears.
std::string to_jsonl(const TradeRoundTrace& trace);

/// Accepts exactly the complete paths of the round automaton:
///   GetPublicParams, Decide                                   (hold)
///   GetPublicParams, Decide, Prove, SubmitProof, PublicParamCheck,
///     VerifyResult(true), Swap                                (trade)
/// or any prefix of the trade path cut short by a single final Abort, where
/// VerifyResult(false) must be followed by Abort.
bool conformance_check(const TradeRoundTrace& trace);

/// Faults injected into the proof between proving and submission.
enum class Tamper { None, Price, Upper, Lower, Commitment, Tag };

struct SimulationConfig {
    chain::ChainConfig chain;
    std::int64_t slippage_bps = 0;
    std::string setup_seed = "privbot-setup";
    std::uint64_t seed = 7; // nonces and off-chain latency samples
    std::string bot_id = "offchain-bot";
    Cents liquidity_quote = 1'000'000'000'000'000; // provider float, cents
    BaseUnits liquidity_base = 1'000'000'000'000'000;
};

/// A chain, a DEX and a proof deployment wired together for one epoch.
/// Rounds run strictly in sequence on this shared state.
class Simulation {
public:
    Simulation(market::PriceSeries feed, SimulationConfig config = {});

    /// Subscribes on-chain and forwards the funds into the bot's DEX vault.
    void subscribe(const std::string& user, Cents amount);

    /// One full round at candle timestamp `t`. Errors become a final Abort.
    /// A decision the bot cannot act on (buy with no quote, sell with no base)
    /// is handled as a hold.
    TradeRoundTrace run_round(std::uint64_t round, std::int64_t t, const ParamConfig& config,
                              Tamper tamper = Tamper::None);

    /// Bot holdings marked at `price`.
    Cents pool_value(Cents price) const;

    chain::Chain& chain() noexcept { return chain_; }
    const chain::Chain& chain() const noexcept { return chain_; }
    dex::Dex& dex() noexcept { return dex_; }
    const dex::Dex& dex() const noexcept { return dex_; }
    const zkproof::SetupKeys& keys() const noexcept { return keys_; }
    const SimulationConfig& config() const noexcept { return config_; }

private:
    SimulationConfig config_;
    chain::Chain chain_;
    dex::Dex dex_;
    zkproof::SetupKeys keys_;
    zkproof::NonceSource nonces_;
    std::mt19937_64 latency_rng_;
};

struct EpochConfig {
    ParamConfig config;
    std::int64_t period_seconds = 600;
    std::size_t rounds = 1;
    std::size_t users = 1'000;
    Cents deposit = 100'000;
    /// First round timestamp; defaults to the first candle with n candles of
    /// history.
    std::optional<std::int64_t> start_timestamp;
    SimulationConfig simulation;
};

struct PhaseSummary {
    std::size_t count = 0;
    double mean = 0;
    double min = 0;
    double max = 0;
};

PhaseSummary summarize(std::span<const double> samples);

struct EpochReport {
    ParamConfig config;
    std::int64_t period_seconds = 0;
    std::size_t rounds = 0;
    std::size_t trades = 0;
    std::size_t holds = 0;
    std::size_t aborts = 0;
    std::map<chain::Phase, std::vector<double>> phase_samples;
    std::vector<double> end_to_end_samples; // rounds that reached Swap
    std::int64_t total_gas = 0;
    Cents initial_pool = 0;
    Cents final_pool = 0;
    chain::Settlement settlement;
    chain::GasSchedule schedule;
    chain::GasLedger ledger;
    std::vector<TradeRoundTrace> traces;

    nlohmann::json to_json() const;
    /// `phase,round,seconds` for box-plot style summaries.
    std::string latency_csv() const;
    std::string traces_jsonl() const;
};

/// Resamples the feed to the epoch period, subscribes `users` equal
/// depositors, runs `rounds` consecutive rounds and settles. Throws
/// FeedExhausted when the feed has too few candles.
EpochReport run_epoch(const market::PriceSeries& feed, const EpochConfig& config);

} // namespace privbot::orchestrator
