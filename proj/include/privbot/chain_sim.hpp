#pragma once

#include "privbot/crypto.hpp"
#include "privbot/market_data.hpp"
#include "privbot/strategy.hpp"
#include "privbot/zkproof.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace privbot::chain {

using strategy::PublicParams;

/// Per-call gas and the gas-to-dollar conversion. The defaults put one round
/// at 473,402 gas = 0.04592 ETH, about $150.
struct GasSchedule {
    std::int64_t public_params_gas = 281'715;
    std::int64_t verifier_gas_mean = 191'687;
    double gas_price_gwei = 97.0;
    double eth_usd = 3'267.0;
    double verifier_jitter_pct = 2.0; // uniform +/- around the mean

    bool valid() const noexcept;
    double eth_for_gas(std::int64_t gas) const noexcept { return static_cast<double>(gas) * gas_price_gwei * 1e-9; }
    double usd_for_gas(std::int64_t gas) const noexcept { return eth_for_gas(gas) * eth_usd; }
    /// Rounded to the nearest cent.
    Cents usd_cents_for_gas(std::int64_t gas) const noexcept;
};

enum class Contract { BotContract, Verifier };
std::string_view contract_name(Contract c) noexcept;

struct GasEntry {
    std::uint64_t round = 0;
    Contract contract = Contract::BotContract;
    std::int64_t gas = 0;
    std::int64_t timestamp = 0;
    double seconds = 0; // simulated call latency
};

/// Append-only record of every gas-consuming contract call.
class GasLedger {
public:
    void append(const GasEntry& entry);
    std::span<const GasEntry> entries() const noexcept { return entries_; }
    std::int64_t total_gas() const noexcept;
    std::int64_t total_gas(Contract c) const noexcept;
    std::size_t count(Contract c) const noexcept;
    /// `round,contract,gas,seconds`
    std::string to_csv() const;

private:
    std::vector<GasEntry> entries_;
};

enum class Phase { PublicParams, ProofGeneration, Verification, Trade };
inline constexpr Phase kAllPhases[] = {Phase::PublicParams, Phase::ProofGeneration, Phase::Verification,
                                       Phase::Trade};

std::string_view phase_name(Phase p) noexcept;
/// Throws UnknownPhase.
Phase parse_phase(std::string_view name);

enum class LatencyFamily { ClippedLogNormal, Constant };

struct PhaseLatency {
    double mean = 1.0;
    double min = 0.5;
    double max = 2.0;
    double sigma = 0.5; // log-space spread for the log-normal family
};

/// Per-phase latency distributions. The log-normal location is solved so the
/// clipped distribution has exactly the configured mean.
struct LatencyModel {
    PhaseLatency public_params{22.8, 1.2, 415.8, 1.0};
    PhaseLatency proof_generation{0.5, 0.2, 0.8, 0.3};
    PhaseLatency verification{23.0, 1.6, 317.2, 1.0};
    PhaseLatency trade{2.3, 1.5, 3.5, 0.15};
    LatencyFamily family = LatencyFamily::ClippedLogNormal;

    const PhaseLatency& get(Phase p) const noexcept;
    PhaseLatency& get(Phase p) noexcept;
};

/// Mean of a log-normal(mu, sigma) clipped to [min, max].
double clipped_lognormal_mean(double mu, double sigma, double min, double max);
/// Location mu whose clipped mean equals `phase.mean`.
double calibrated_location(const PhaseLatency& phase);

double sample_latency(const LatencyModel& model, Phase phase, std::mt19937_64& rng);
/// Throws UnknownPhase for an unrecognised phase name.
double sample_latency(const LatencyModel& model, std::string_view phase, std::mt19937_64& rng);

struct ChainConfig {
    GasSchedule gas;
    LatencyModel latency;
    bool jitter = true;
    std::uint64_t jitter_seed = 7;
    std::uint64_t latency_seed = 11;
};

nlohmann::json to_json(const ChainConfig& config);
/// Missing keys keep their defaults; throws BadConfig on bad values.
ChainConfig chain_config_from_json(const nlohmann::json& j);
ChainConfig load_chain_config(const std::filesystem::path& path);

struct Subscription {
    std::string user;
    Cents deposit = 0;
};

struct UserSettlement {
    std::string user;
    Cents deposit = 0;
    Cents gross_payout = 0;
    Cents gross_earnings = 0;
    Cents gas_share = 0; // USD cents
    Cents net_payout = 0;
};

struct Settlement {
    Cents initial_pool = 0;
    Cents final_pool = 0;
    std::int64_t total_gas = 0;
    Cents total_gas_usd = 0;
    std::vector<UserSettlement> users;
};

/// Pays out `final_pool` pro rata to deposits and splits the ledger's gas bill
/// equally across users. Leftover cents from either split go one each to the
/// first users in subscription order, so both sums are exact.
Settlement settle_epoch(std::span<const Subscription> subscriptions, Cents final_pool, const GasLedger& ledger,
                        const GasSchedule& schedule);
nlohmann::json to_json(const Settlement& s);

/// One logical chain: the price oracle, the bot contract (public
/// parameters, public-input check, subscriptions) and a single verifier
/// contract. Calls are serialized; the ledger is the only mutable state that
/// contract calls touch.
class Chain {
public:
    Chain(market::PriceSeries feed, ChainConfig config = {});

    /// Throws NoData when `t` is not a feed timestamp.
    Cents oracle_get_price(std::int64_t t) const;

    /// Oracle price and Bollinger bands at `t`; charges public_params_gas and
    /// remembers the issued values for the round.
    PublicParams get_public_params(std::uint64_t round, std::int64_t t, std::size_t n, std::int64_t d);
    std::optional<PublicParams> issued_params(std::uint64_t round) const;

    /// Exactly one verifier per deployment; a second call throws
    /// VerifierAlreadyDeployed.
    void deploy_verifier(crypto::Bytes verification_key);
    bool verifier_deployed() const noexcept { return !verification_key_.empty(); }
    std::optional<std::string> verifier_source() const;

    /// True iff the proof verifies and its plaintext public inputs equal
    /// `expected` field by field. Charges verifier gas either way.
    bool verify_and_check(std::uint64_t round, const zkproof::Proof& proof, const PublicParams& expected,
                          std::int64_t t = 0);

    void subscribe(const std::string& user, Cents amount);
    Cents total_pool() const noexcept;
    std::span<const Subscription> subscriptions() const noexcept { return subscriptions_; }
    Settlement settle_epoch(Cents final_pool) const;

    const GasLedger& ledger() const noexcept { return ledger_; }
    const ChainConfig& config() const noexcept { return config_; }
    const market::PriceSeries& feed() const noexcept { return feed_; }

private:
    std::int64_t verifier_gas();

    market::PriceSeries feed_;
    ChainConfig config_;
    GasLedger ledger_;
    crypto::Bytes verification_key_;
    std::vector<Subscription> subscriptions_;
    std::map<std::uint64_t, PublicParams> issued_;
    std::mt19937_64 jitter_rng_;
    std::mt19937_64 latency_rng_;
};

} // namespace privbot::chain
