#include "privbot/orchestrator.hpp"

#include "privbot/error.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace privbot::orchestrator {
namespace {

Message msg(MessageKind kind) {
    Message m;
    m.kind = kind;
    return m;
}

Message abort_msg(std::string reason) {
    auto m = msg(MessageKind::Abort);
    m.reason = std::move(reason);
    return m;
}

void apply(Tamper tamper, zkproof::Proof& proof) {
    switch (tamper) {
    case Tamper::None: break;
    case Tamper::Price: proof.public_inputs.price += 1; break;
    case Tamper::Upper: proof.public_inputs.upper += 1; break;
    case Tamper::Lower: proof.public_inputs.lower -= 1; break;
    case Tamper::Commitment: proof.witness_commitment[0] ^= 0x01; break;
    case Tamper::Tag: proof.binding_tag[31] ^= 0x80; break;
    }
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

nlohmann::json summary_json(const PhaseSummary& s) {
    return {{"count", s.count}, {"mean", s.mean}, {"min", s.min}, {"max", s.max}};
}

} // namespace

std::string_view message_name(MessageKind k) noexcept {
    switch (k) {
    case MessageKind::GetPublicParams: return "GetPublicParams";
    case MessageKind::Decide: return "Decide";
    case MessageKind::Prove: return "Prove";
    case MessageKind::SubmitProof: return "SubmitProof";
    case MessageKind::PublicParamCheck: return "PublicParamCheck";
    case MessageKind::VerifyResult: return "VerifyResult";
    case MessageKind::Swap: return "Swap";
    case MessageKind::Abort: return "Abort";
    }
    return "Unknown";
}

bool TradeRoundTrace::swapped() const noexcept {
    return std::any_of(messages.begin(), messages.end(), [](const Message& m) { return m.kind == MessageKind::Swap; });
}

bool TradeRoundTrace::aborted() const noexcept {
    return !messages.empty() && messages.back().kind == MessageKind::Abort;
}

double TradeRoundTrace::end_to_end_seconds() const noexcept {
    double sum = 0;
    for (const auto& [phase, s] : latencies)
        sum += s;
    return sum;
}

std::string to_jsonl(const TradeRoundTrace& trace) {
    std::string out;
    for (std::size_t i = 0; i < trace.messages.size(); ++i) {
        const auto& m = trace.messages[i];
        nlohmann::ordered_json j;
        j["round"] = trace.round;
        j["t"] = trace.timestamp;
        j["seq"] = i;
        j["msg"] = std::string(message_name(m.kind));
        if (m.params) {
            j["price"] = m.params->price;
            j["upper"] = m.params->upper;
            j["lower"] = m.params->lower;
        }
        if (m.ok)
            j["ok"] = *m.ok;
        if (m.gas)
            j["gas"] = *m.gas;
        if (m.seconds)
            j["seconds"] = fixed3(*m.seconds);
        if (!m.digest_hex.empty())
            j["digest"] = m.digest_hex;
        if (!m.reason.empty())
            j["reason"] = m.reason;
        out += j.dump();
        out += '\n';
    }
    return out;
}

bool conformance_check(const TradeRoundTrace& trace) {
    enum class State { Start, Params, Decided, Proved, Submitted, Checked, Verified, Rejected, Done };
    auto state = State::Start;
    for (const auto& m : trace.messages) {
        const auto k = m.kind;
        if (state == State::Done)
            return false;
        if (k == MessageKind::Abort) {
            // Abort is allowed anywhere the bot or a contract can fail, except
            // between submission and the verifier's answer.
            if (state == State::Submitted || state == State::Checked)
                return false;
            state = State::Done;
            continue;
        }
        switch (state) {
        case State::Start:
            if (k != MessageKind::GetPublicParams)
                return false;
            state = State::Params;
            break;
        case State::Params:
            if (k != MessageKind::Decide)
                return false;
            state = State::Decided;
            break;
        case State::Decided:
            if (k != MessageKind::Prove)
                return false;
            state = State::Proved;
            break;
        case State::Proved:
            if (k != MessageKind::SubmitProof)
                return false;
            state = State::Submitted;
            break;
        case State::Submitted:
            if (k != MessageKind::PublicParamCheck)
                return false;
            state = State::Checked;
            break;
        case State::Checked:
            if (k != MessageKind::VerifyResult || !m.ok)
                return false;
            state = *m.ok ? State::Verified : State::Rejected;
            break;
        case State::Verified:
            if (k != MessageKind::Swap)
                return false;
            state = State::Done;
            break;
        case State::Rejected: return false; // only Abort may follow a failed verification
        case State::Done: return false;
        }
    }
    return state == State::Decided || state == State::Done;
}

Simulation::Simulation(market::PriceSeries feed, SimulationConfig config)
    : config_(std::move(config)), chain_(feed, config_.chain), dex_([&] {
          const auto& pair = feed.pair();
          const auto colon = pair.find(':');
          if (colon == std::string::npos || colon == 0 || colon + 1 == pair.size())
              throw Error(Errc::InvalidArgument, "pair label must look like BASE:QUOTE, got '" + pair + "'");
          return dex::Dex(pair.substr(0, colon), pair.substr(colon + 1), config_.slippage_bps);
      }()),
      keys_(zkproof::setup(config_.setup_seed)), nonces_(config_.seed), latency_rng_(config_.seed ^ 0x9e3779b97f4a7c15ULL) {
    chain_.deploy_verifier(keys_.verification_key);
    dex_.deposit(dex_.liquidity_provider(), dex_.quote_asset(), config_.liquidity_quote);
    dex_.deposit(dex_.liquidity_provider(), dex_.base_asset(), config_.liquidity_base);
}

void Simulation::subscribe(const std::string& user, Cents amount) {
    chain_.subscribe(user, amount);
    dex_.deposit(config_.bot_id, dex_.quote_asset(), amount);
}

Cents Simulation::pool_value(Cents price) const {
    return mark_to_market(dex_.balance(config_.bot_id, dex_.quote_asset()),
                          dex_.balance(config_.bot_id, dex_.base_asset()), price);
}

TradeRoundTrace Simulation::run_round(std::uint64_t round, std::int64_t t, const ParamConfig& config, Tamper tamper) {
    TradeRoundTrace trace;
    trace.round = round;
    trace.timestamp = t;
    const auto gas_before = chain_.ledger().entries().size();
    const auto collect_gas = [&] {
        const auto entries = chain_.ledger().entries();
        trace.gas.assign(entries.begin() + static_cast<std::ptrdiff_t>(gas_before), entries.end());
    };

    // Off-chain bot asks the bot contract for the public parameters.
    PublicParams params;
    try {
        params = chain_.get_public_params(round, t, static_cast<std::size_t>(config.validated().n), config.d);
    } catch (const Error& e) {
        trace.messages.push_back(abort_msg(e.what()));
        collect_gas();
        return trace;
    }
    {
        const auto& entry = chain_.ledger().entries().back();
        auto m = msg(MessageKind::GetPublicParams);
        m.params = params;
        m.gas = entry.gas;
        m.seconds = entry.seconds;
        trace.messages.push_back(m);
        trace.latencies.emplace_back(chain::Phase::PublicParams, entry.seconds);
    }

    auto decision = strategy::decide(params, config);
    const auto quote_held = dex_.balance(config_.bot_id, dex_.quote_asset());
    const auto base_held = dex_.balance(config_.bot_id, dex_.base_asset());
    if ((decision == strategy::TradeDecision::Buy && quote_held <= 0) ||
        (decision == strategy::TradeDecision::Sell && base_held <= 0))
        decision = strategy::TradeDecision::Hold;
    trace.decision = decision;
    trace.messages.push_back(msg(MessageKind::Decide));
    const auto witness = zkproof::witness_for(decision, config);
    if (!witness) {
        collect_gas();
        return trace;
    }

    zkproof::Proof proof;
    try {
        proof = zkproof::prove(keys_.proving_key, params, *witness, nonces_.next());
    } catch (const Error& e) {
        trace.messages.push_back(abort_msg(e.what()));
        collect_gas();
        return trace;
    }
    {
        const auto seconds = chain::sample_latency(config_.chain.latency, chain::Phase::ProofGeneration, latency_rng_);
        auto m = msg(MessageKind::Prove);
        m.seconds = seconds;
        trace.messages.push_back(m);
        trace.latencies.emplace_back(chain::Phase::ProofGeneration, seconds);
    }

    apply(tamper, proof);
    trace.messages.push_back(msg(MessageKind::SubmitProof));

    const auto issued = chain_.issued_params(round);
    {
        auto m = msg(MessageKind::PublicParamCheck);
        m.ok = issued && proof.public_inputs == *issued;
        trace.messages.push_back(m);
    }
    const bool verified = chain_.verify_and_check(round, proof, issued.value_or(PublicParams{}), t);
    {
        const auto& entry = chain_.ledger().entries().back();
        auto m = msg(MessageKind::VerifyResult);
        m.ok = verified;
        m.gas = entry.gas;
        m.seconds = entry.seconds;
        trace.messages.push_back(m);
        trace.latencies.emplace_back(chain::Phase::Verification, entry.seconds);
    }
    collect_gas();
    if (!verified) {
        trace.messages.push_back(abort_msg("proof rejected"));
        return trace;
    }

    const bool buying = decision == strategy::TradeDecision::Buy;
    try {
        const auto result = buying ? dex_.swap(config_.bot_id, dex_.quote_asset(), quote_held, params.price)
                                   : dex_.swap(config_.bot_id, dex_.base_asset(), base_held, params.price);
        const auto seconds = chain::sample_latency(config_.chain.latency, chain::Phase::Trade, latency_rng_);
        auto m = msg(MessageKind::Swap);
        m.digest_hex = crypto::to_hex(result.commitment.state_root);
        m.seconds = seconds;
        trace.messages.push_back(m);
        trace.latencies.emplace_back(chain::Phase::Trade, seconds);
    } catch (const Error& e) {
        trace.messages.push_back(abort_msg(e.what()));
    }
    return trace;
}

PhaseSummary summarize(std::span<const double> samples) {
    PhaseSummary s;
    s.count = samples.size();
    if (samples.empty())
        return s;
    s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    s.min = *std::min_element(samples.begin(), samples.end());
    s.max = *std::max_element(samples.begin(), samples.end());
    return s;
}

EpochReport run_epoch(const market::PriceSeries& feed, const EpochConfig& config) {
    if (config.rounds == 0)
        throw Error(Errc::InvalidArgument, "an epoch needs at least one round");
    if (config.users == 0)
        throw Error(Errc::EmptyPool, "an epoch needs at least one subscriber");
    config.config.validated();
    const auto series =
        feed.period_seconds() == config.period_seconds ? feed : market::resample(feed, config.period_seconds);

    std::size_t start = static_cast<std::size_t>(config.config.n) - 1;
    if (config.start_timestamp) {
        const auto idx = series.index_of(*config.start_timestamp);
        if (!idx)
            throw Error(Errc::NoData, "no candle at the requested start", *config.start_timestamp);
        start = *idx;
    }
    if (start + config.rounds > series.size())
        throw Error(Errc::FeedExhausted, "feed has " + std::to_string(series.size() - std::min(start, series.size())) +
                                             " candles left for " + std::to_string(config.rounds) + " rounds");

    Simulation sim(series, config.simulation);
    for (std::size_t u = 0; u < config.users; ++u)
        sim.subscribe("user-" + std::to_string(u), config.deposit);

    EpochReport report;
    report.config = config.config;
    report.period_seconds = config.period_seconds;
    report.rounds = config.rounds;
    report.initial_pool = sim.chain().total_pool();
    for (std::size_t r = 0; r < config.rounds; ++r) {
        const auto t = series[start + r].timestamp;
        auto trace = sim.run_round(r + 1, t, config.config);
        if (trace.swapped()) {
            ++report.trades;
            report.end_to_end_samples.push_back(trace.end_to_end_seconds());
        } else if (trace.aborted()) {
            ++report.aborts;
        } else {
            ++report.holds;
        }
        for (const auto& [phase, s] : trace.latencies)
            report.phase_samples[phase].push_back(s);
        report.traces.push_back(std::move(trace));
    }
    const auto last_price = series[start + config.rounds - 1].close;
    report.final_pool = sim.pool_value(last_price);
    report.settlement = sim.chain().settle_epoch(report.final_pool);
    report.ledger = sim.chain().ledger();
    report.total_gas = report.ledger.total_gas();
    report.schedule = sim.chain().config().gas;
    return report;
}

nlohmann::json EpochReport::to_json() const {
    nlohmann::json j;
    j["config"] = config.label();
    j["period_seconds"] = period_seconds;
    j["rounds"] = rounds;
    j["trades"] = trades;
    j["holds"] = holds;
    j["aborts"] = aborts;
    for (auto p : chain::kAllPhases) {
        const auto it = phase_samples.find(p);
        j["latency"][std::string(chain::phase_name(p))] =
            summary_json(it == phase_samples.end() ? PhaseSummary{} : summarize(it->second));
    }
    j["latency"]["end_to_end"] = summary_json(summarize(end_to_end_samples));
    j["gas"]["total"] = total_gas;
    j["gas"]["bot_contract"] = ledger.total_gas(chain::Contract::BotContract);
    j["gas"]["verifier"] = ledger.total_gas(chain::Contract::Verifier);
    j["gas"]["bot_contract_calls"] = ledger.count(chain::Contract::BotContract);
    j["gas"]["verifier_calls"] = ledger.count(chain::Contract::Verifier);
    j["gas"]["total_eth"] = schedule.eth_for_gas(total_gas);
    j["gas"]["total_usd_cents"] = schedule.usd_cents_for_gas(total_gas);
    j["gas"]["usd_per_trade_round"] = trades ? schedule.usd_for_gas(total_gas) / static_cast<double>(trades) : 0.0;
    j["pool"]["initial_cents"] = initial_pool;
    j["pool"]["final_cents"] = final_pool;
    j["pool"]["return_pct"] =
        initial_pool ? (static_cast<double>(final_pool) - static_cast<double>(initial_pool)) /
                           static_cast<double>(initial_pool) * 100.0
                     : 0.0;
    j["settlement"] = chain::to_json(settlement);
    return j;
}

std::string EpochReport::latency_csv() const {
    std::ostringstream out;
    out << "phase,round,seconds\n";
    for (const auto& trace : traces) {
        for (const auto& [phase, s] : trace.latencies)
            out << chain::phase_name(phase) << ',' << trace.round << ',' << fixed3(s) << '\n';
        if (trace.swapped())
            out << "end_to_end," << trace.round << ',' << fixed3(trace.end_to_end_seconds()) << '\n';
    }
    return out.str();
}

std::string EpochReport::traces_jsonl() const {
    std::string out;
    for (const auto& t : traces)
        out += to_jsonl(t);
    return out;
}

} // namespace privbot::orchestrator
