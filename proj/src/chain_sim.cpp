#include "privbot/chain_sim.hpp"

#include "privbot/error.hpp"
#include "privbot/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace privbot::chain {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Splits `total` cents into `parts` shares proportional to `weights`, with the
// leftover cents going one each to the earliest entries.
std::vector<Cents> apportion(Cents total, std::span<const Cents> weights) {
    __int128 weight_sum = 0;
    for (auto w : weights)
        weight_sum += w;
    std::vector<Cents> shares(weights.size());
    __int128 assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        shares[i] = static_cast<Cents>(static_cast<__int128>(total) * weights[i] / weight_sum);
        assigned += shares[i];
    }
    auto leftover = static_cast<Cents>(total - assigned);
    for (std::size_t i = 0; leftover > 0 && i < shares.size(); ++i, --leftover)
        ++shares[i];
    for (std::size_t i = 0; leftover < 0 && i < shares.size(); ++i, ++leftover)
        --shares[i];
    return shares;
}

void check_phase(const PhaseLatency& p, std::string_view name) {
    if (!(p.min > 0 && p.min <= p.mean && p.mean <= p.max && p.sigma > 0))
        throw Error(Errc::BadConfig, std::string("latency bounds for ") + std::string(name) +
                                         " must satisfy 0 < min <= mean <= max and sigma > 0");
}

} // namespace

bool GasSchedule::valid() const noexcept {
    return public_params_gas > 0 && verifier_gas_mean > 0 && gas_price_gwei > 0 && eth_usd > 0 &&
           verifier_jitter_pct >= 0 && verifier_jitter_pct < 100;
}

Cents GasSchedule::usd_cents_for_gas(std::int64_t gas) const noexcept {
    return static_cast<Cents>(std::llround(usd_for_gas(gas) * 100.0));
}

std::string_view contract_name(Contract c) noexcept { return c == Contract::BotContract ? "bot_contract" : "verifier"; }

void GasLedger::append(const GasEntry& entry) {
    if (entry.gas < 0)
        throw Error(Errc::InvalidArgument, "negative gas");
    entries_.push_back(entry);
}

std::int64_t GasLedger::total_gas() const noexcept {
    return std::accumulate(entries_.begin(), entries_.end(), std::int64_t{0},
                           [](std::int64_t acc, const GasEntry& e) { return acc + e.gas; });
}

std::int64_t GasLedger::total_gas(Contract c) const noexcept {
    std::int64_t sum = 0;
    for (const auto& e : entries_)
        if (e.contract == c)
            sum += e.gas;
    return sum;
}

std::size_t GasLedger::count(Contract c) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [c](const GasEntry& e) { return e.contract == c; }));
}

std::string GasLedger::to_csv() const {
    std::ostringstream out;
    out << "round,contract,gas,seconds\n";
    char buf[32];
    for (const auto& e : entries_) {
        std::snprintf(buf, sizeof buf, "%.3f", e.seconds);
        out << e.round << ',' << contract_name(e.contract) << ',' << e.gas << ',' << buf << '\n';
    }
    return out.str();
}

std::string_view phase_name(Phase p) noexcept {
    switch (p) {
    case Phase::PublicParams: return "public_params";
    case Phase::ProofGeneration: return "proof_generation";
    case Phase::Verification: return "verification";
    case Phase::Trade: return "trade";
    }
    return "unknown";
}

Phase parse_phase(std::string_view name) {
    for (auto p : kAllPhases)
        if (phase_name(p) == name)
            return p;
    throw Error(Errc::UnknownPhase, "unknown latency phase '" + std::string(name) + "'");
}

const PhaseLatency& LatencyModel::get(Phase p) const noexcept {
    switch (p) {
    case Phase::PublicParams: return public_params;
    case Phase::ProofGeneration: return proof_generation;
    case Phase::Verification: return verification;
    case Phase::Trade: return trade;
    }
    return trade;
}

PhaseLatency& LatencyModel::get(Phase p) noexcept {
    return const_cast<PhaseLatency&>(static_cast<const LatencyModel&>(*this).get(p));
}

double clipped_lognormal_mean(double mu, double sigma, double min, double max) {
    const double la = std::log(min);
    const double lb = std::log(max);
    const double below = normal_cdf((la - mu) / sigma);
    const double above = 1.0 - normal_cdf((lb - mu) / sigma);
    const double inner = std::exp(mu + 0.5 * sigma * sigma) *
                         (normal_cdf((lb - mu - sigma * sigma) / sigma) - normal_cdf((la - mu - sigma * sigma) / sigma));
    return min * below + max * above + inner;
}

double calibrated_location(const PhaseLatency& phase) {
    check_phase(phase, "phase");
    if (phase.mean <= phase.min)
        return std::log(phase.min) - 40.0 * phase.sigma;
    if (phase.mean >= phase.max)
        return std::log(phase.max) + 40.0 * phase.sigma;
    // The clipped mean is increasing in mu.
    double lo = std::log(phase.min) - 20.0 * phase.sigma;
    double hi = std::log(phase.max) + 20.0 * phase.sigma;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (clipped_lognormal_mean(mid, phase.sigma, phase.min, phase.max) < phase.mean)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double sample_latency(const LatencyModel& model, Phase phase, std::mt19937_64& rng) {
    const auto& p = model.get(phase);
    if (model.family == LatencyFamily::Constant)
        return p.mean;
    std::lognormal_distribution<double> dist(calibrated_location(p), p.sigma);
    return std::clamp(dist(rng), p.min, p.max);
}

double sample_latency(const LatencyModel& model, std::string_view phase, std::mt19937_64& rng) {
    return sample_latency(model, parse_phase(phase), rng);
}

nlohmann::json to_json(const ChainConfig& config) {
    nlohmann::json j;
    j["gas"] = {{"public_params_gas", config.gas.public_params_gas},
                {"verifier_gas_mean", config.gas.verifier_gas_mean},
                {"gas_price_gwei", config.gas.gas_price_gwei},
                {"eth_usd", config.gas.eth_usd},
                {"verifier_jitter_pct", config.gas.verifier_jitter_pct}};
    j["latency"]["family"] = config.latency.family == LatencyFamily::Constant ? "constant" : "clipped_lognormal";
    for (auto p : kAllPhases) {
        const auto& ph = config.latency.get(p);
        j["latency"]["phases"][std::string(phase_name(p))] = {
            {"mean", ph.mean}, {"min", ph.min}, {"max", ph.max}, {"sigma", ph.sigma}};
    }
    j["jitter"] = config.jitter;
    j["jitter_seed"] = config.jitter_seed;
    j["latency_seed"] = config.latency_seed;
    return j;
}

ChainConfig chain_config_from_json(const nlohmann::json& j) {
    ChainConfig c;
    try {
        if (j.contains("gas")) {
            const auto& g = j["gas"];
            c.gas.public_params_gas = g.value("public_params_gas", c.gas.public_params_gas);
            c.gas.verifier_gas_mean = g.value("verifier_gas_mean", c.gas.verifier_gas_mean);
            c.gas.gas_price_gwei = g.value("gas_price_gwei", c.gas.gas_price_gwei);
            c.gas.eth_usd = g.value("eth_usd", c.gas.eth_usd);
            c.gas.verifier_jitter_pct = g.value("verifier_jitter_pct", c.gas.verifier_jitter_pct);
        }
        if (j.contains("latency")) {
            const auto& l = j["latency"];
            if (l.contains("family")) {
                const auto family = l["family"].get<std::string>();
                if (family == "constant")
                    c.latency.family = LatencyFamily::Constant;
                else if (family == "clipped_lognormal")
                    c.latency.family = LatencyFamily::ClippedLogNormal;
                else
                    throw Error(Errc::BadConfig, "unknown latency family '" + family + "'");
            }
            if (l.contains("phases")) {
                for (const auto& [name, v] : l["phases"].items()) {
                    auto& ph = c.latency.get(parse_phase(name));
                    ph.mean = v.value("mean", ph.mean);
                    ph.min = v.value("min", ph.min);
                    ph.max = v.value("max", ph.max);
                    ph.sigma = v.value("sigma", ph.sigma);
                }
            }
        }
        c.jitter = j.value("jitter", c.jitter);
        c.jitter_seed = j.value("jitter_seed", c.jitter_seed);
        c.latency_seed = j.value("latency_seed", c.latency_seed);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::BadConfig, std::string("malformed chain config: ") + e.what());
    }
    if (!c.gas.valid())
        throw Error(Errc::BadConfig, "gas schedule values must be positive");
    for (auto p : kAllPhases)
        check_phase(c.latency.get(p), phase_name(p));
    return c;
}

ChainConfig load_chain_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::FileNotFound, "cannot open " + path.string());
    try {
        return chain_config_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::BadConfig, std::string("chain config is not JSON: ") + e.what());
    }
}

Settlement settle_epoch(std::span<const Subscription> subscriptions, Cents final_pool, const GasLedger& ledger,
                        const GasSchedule& schedule) {
    if (subscriptions.empty())
        throw Error(Errc::EmptyPool, "no subscribers to settle");
    if (final_pool < 0)
        throw Error(Errc::InvalidArgument, "final pool cannot be negative");

    std::vector<Cents> deposits;
    std::vector<Cents> equal(subscriptions.size(), 1);
    Settlement s;
    for (const auto& sub : subscriptions) {
        deposits.push_back(sub.deposit);
        s.initial_pool += sub.deposit;
    }
    s.final_pool = final_pool;
    s.total_gas = ledger.total_gas();
    s.total_gas_usd = schedule.usd_cents_for_gas(s.total_gas);

    const auto payouts = apportion(final_pool, deposits);
    const auto gas_shares = apportion(s.total_gas_usd, equal);
    for (std::size_t i = 0; i < subscriptions.size(); ++i) {
        UserSettlement u;
        u.user = subscriptions[i].user;
        u.deposit = subscriptions[i].deposit;
        u.gross_payout = payouts[i];
        u.gross_earnings = payouts[i] - u.deposit;
        u.gas_share = gas_shares[i];
        u.net_payout = u.gross_payout - u.gas_share;
        s.users.push_back(std::move(u));
    }
    return s;
}

nlohmann::json to_json(const Settlement& s) {
    nlohmann::json j;
    j["initial_pool_cents"] = s.initial_pool;
    j["final_pool_cents"] = s.final_pool;
    j["total_gas"] = s.total_gas;
    j["total_gas_usd_cents"] = s.total_gas_usd;
    j["users"] = nlohmann::json::array();
    for (const auto& u : s.users)
        j["users"].push_back({{"user", u.user},
                              {"deposit_cents", u.deposit},
                              {"gross_payout_cents", u.gross_payout},
                              {"gross_earnings_cents", u.gross_earnings},
                              {"gas_share_usd_cents", u.gas_share},
                              {"net_payout_cents", u.net_payout}});
    return j;
}

Chain::Chain(market::PriceSeries feed, ChainConfig config)
    : feed_(std::move(feed)), config_(std::move(config)), jitter_rng_(config_.jitter_seed),
      latency_rng_(config_.latency_seed) {
    if (!config_.gas.valid())
        throw Error(Errc::BadConfig, "invalid gas schedule");
}

Cents Chain::oracle_get_price(std::int64_t t) const {
    const auto idx = feed_.index_of(t);
    if (!idx)
        throw Error(Errc::NoData, "oracle has no price at " + std::to_string(t), t);
    return feed_[*idx].close;
}

PublicParams Chain::get_public_params(std::uint64_t round, std::int64_t t, std::size_t n, std::int64_t d) {
    const auto price = oracle_get_price(t);
    const auto bands = indicators::bollinger(feed_, t, n, d);
    const PublicParams params{price, bands.upper, bands.lower};
    ledger_.append({round, Contract::BotContract, config_.gas.public_params_gas, t,
                    sample_latency(config_.latency, Phase::PublicParams, latency_rng_)});
    issued_[round] = params;
    return params;
}

std::optional<PublicParams> Chain::issued_params(std::uint64_t round) const {
    const auto it = issued_.find(round);
    if (it == issued_.end())
        return std::nullopt;
    return it->second;
}

void Chain::deploy_verifier(crypto::Bytes verification_key) {
    if (verifier_deployed())
        throw Error(Errc::VerifierAlreadyDeployed, "a verifier contract is already deployed");
    if (verification_key.empty())
        throw Error(Errc::InvalidArgument, "empty verification key");
    verification_key_ = std::move(verification_key);
}

std::optional<std::string> Chain::verifier_source() const { return zkproof::published_source(verification_key_); }

std::int64_t Chain::verifier_gas() {
    const auto mean = static_cast<double>(config_.gas.verifier_gas_mean);
    if (!config_.jitter || config_.gas.verifier_jitter_pct == 0.0)
        return config_.gas.verifier_gas_mean;
    const double j = config_.gas.verifier_jitter_pct / 100.0;
    std::uniform_real_distribution<double> dist(-j, j);
    return std::llround(mean * (1.0 + dist(jitter_rng_)));
}

bool Chain::verify_and_check(std::uint64_t round, const zkproof::Proof& proof, const PublicParams& expected,
                             std::int64_t t) {
    if (!verifier_deployed())
        throw Error(Errc::VerifierNotDeployed, "no verifier contract deployed");
    const bool proof_ok = zkproof::verify(verification_key_, proof);
    const bool inputs_ok = proof.public_inputs == expected;
    ledger_.append({round, Contract::Verifier, verifier_gas(), t,
                    sample_latency(config_.latency, Phase::Verification, latency_rng_)});
    return proof_ok && inputs_ok;
}

void Chain::subscribe(const std::string& user, Cents amount) {
    if (amount <= 0)
        throw Error(Errc::ZeroAmount, "subscription amount must be positive");
    if (std::any_of(subscriptions_.begin(), subscriptions_.end(),
                    [&](const Subscription& s) { return s.user == user; }))
        throw Error(Errc::DuplicateUser, "user '" + user + "' is already subscribed");
    subscriptions_.push_back({user, amount});
}

Cents Chain::total_pool() const noexcept {
    Cents sum = 0;
    for (const auto& s : subscriptions_)
        sum += s.deposit;
    return sum;
}

Settlement Chain::settle_epoch(Cents final_pool) const {
    return chain::settle_epoch(subscriptions_, final_pool, ledger_, config_.gas);
}

} // namespace privbot::chain
