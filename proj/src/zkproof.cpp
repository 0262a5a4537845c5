#include "privbot/zkproof.hpp"

#include "privbot/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <tuple>

namespace privbot::zkproof {
namespace {

constexpr std::size_t kIdSize = 32;
constexpr std::size_t kSecretSize = 32;
constexpr std::size_t kCommitmentOffset = 56;

constexpr ProofField kLayout[] = {
    {"circuit_id", 0, 32}, {"price", 32, 8}, {"upper", 40, 8}, {"lower", 48, 8},
    {"commitment", 56, 32}, {"tag", 88, 32},
};

constexpr std::string_view kSource = R"(circuit bollinger-v1
  public  price             // current oracle price, cents
  public  upper             // upper Bollinger band, cents
  public  lower             // lower Bollinger band, cents
  private buy_sell_flag     // 1 = buy, 0 = sell
  private bound_percentage  // L when buying, U when selling
  returns flag == 1 ? price < (lower / 100) * (100 + bound_percentage)
                    : price > (upper / 100) * (100 - bound_percentage)
  // "/" truncates toward zero; comparisons are strict
)";

struct KeyParts {
    std::span<const std::uint8_t> circuit_id;
    std::span<const std::uint8_t> secret;
    std::span<const std::uint8_t> rest;
};

std::optional<KeyParts> split_key(std::span<const std::uint8_t> key) {
    if (key.size() < kIdSize + kSecretSize)
        return std::nullopt;
    return KeyParts{key.first(kIdSize), key.subspan(kIdSize, kSecretSize), key.subspan(kIdSize + kSecretSize)};
}

Digest commit(const Witness& w, const Nonce& nonce) {
    crypto::ByteWriter out;
    out.put("privbot.commit.v1").put_u8(static_cast<std::uint8_t>(w.buy_sell_flag)).put_i64(w.bound_percentage).put(
        nonce);
    return crypto::sha256(out.bytes());
}

Digest binding_tag_for(std::span<const std::uint8_t> secret, std::span<const std::uint8_t> circuit_id, const PublicParams& p,
            const Digest& commitment) {
    crypto::ByteWriter out;
    out.put(circuit_id).put_i64(p.price).put_i64(p.upper).put_i64(p.lower).put(commitment);
    return crypto::hmac_sha256(secret, out.bytes());
}

} // namespace

bool Witness::valid() const noexcept {
    return (buy_sell_flag == 0 || buy_sell_flag == 1) && bound_percentage >= strategy::ParamConfig::kMinPct &&
           bound_percentage <= strategy::ParamConfig::kMaxPct;
}

DecisionCircuit::DecisionCircuit() { std::copy(kCircuitId.begin(), kCircuitId.end(), id_bytes_.begin()); }

const DecisionCircuit& DecisionCircuit::instance() {
    static const DecisionCircuit circuit;
    return circuit;
}

std::string_view DecisionCircuit::source() const noexcept { return kSource; }

bool DecisionCircuit::eval(const PublicParams& p, const Witness& w) const noexcept {
    if (w.buy_sell_flag == 1)
        return p.price < strategy::buy_threshold(p.lower, w.bound_percentage);
    return p.price > strategy::sell_threshold(p.upper, w.bound_percentage);
}

bool circuit_eval(const PublicParams& p, const Witness& w) noexcept { return DecisionCircuit::instance().eval(p, w); }

std::optional<Witness> witness_for(strategy::TradeDecision decision, const strategy::ParamConfig& config) noexcept {
    switch (decision) {
    case strategy::TradeDecision::Buy: return Witness{1, config.l};
    case strategy::TradeDecision::Sell: return Witness{0, config.u};
    case strategy::TradeDecision::Hold: return std::nullopt;
    }
    return std::nullopt;
}

SetupKeys setup(std::span<const std::uint8_t> rng_seed) {
    crypto::ByteWriter material;
    material.put("privbot.setup.v1").put(rng_seed);
    const auto secret = crypto::sha256(material.bytes());
    const auto& id = DecisionCircuit::instance().id_bytes();

    SetupKeys keys;
    keys.proving_key = crypto::ByteWriter().put(id).put(secret).bytes();
    keys.verification_key = crypto::ByteWriter().put(id).put(secret).put(kSource).bytes();
    return keys;
}

SetupKeys setup(std::string_view rng_seed) {
    return setup(std::span(reinterpret_cast<const std::uint8_t*>(rng_seed.data()), rng_seed.size()));
}

std::optional<std::string> published_source(std::span<const std::uint8_t> verification_key) {
    const auto parts = split_key(verification_key);
    if (!parts || parts->rest.empty())
        return std::nullopt;
    return std::string(parts->rest.begin(), parts->rest.end());
}

Bytes Proof::serialize() const {
    crypto::ByteWriter out;
    out.put(circuit_id)
        .put_i64(public_inputs.price)
        .put_i64(public_inputs.upper)
        .put_i64(public_inputs.lower)
        .put(witness_commitment)
        .put(binding_tag);
    return std::move(out).take();
}

std::optional<Proof> Proof::deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kProofSize)
        return std::nullopt;
    Proof p;
    std::copy_n(bytes.begin(), 32, p.circuit_id.begin());
    p.public_inputs.price = crypto::read_i64_le(bytes.subspan(32, 8));
    p.public_inputs.upper = crypto::read_i64_le(bytes.subspan(40, 8));
    p.public_inputs.lower = crypto::read_i64_le(bytes.subspan(48, 8));
    std::copy_n(bytes.begin() + 56, 32, p.witness_commitment.begin());
    std::copy_n(bytes.begin() + 88, 32, p.binding_tag.begin());
    return p;
}

std::span<const ProofField> proof_layout() noexcept { return kLayout; }

Proof prove(std::span<const std::uint8_t> proving_key, const PublicParams& p, const Witness& w, const Nonce& nonce) {
    const auto parts = split_key(proving_key);
    if (!parts || !parts->rest.empty())
        throw Error(Errc::InvalidArgument, "malformed proving key");
    if (!w.valid())
        throw Error(Errc::InvalidWitness, "witness out of range");
    if (!circuit_eval(p, w))
        throw Error(Errc::ConstraintUnsatisfied, "witness does not satisfy the decision circuit");

    Proof proof;
    std::copy(parts->circuit_id.begin(), parts->circuit_id.end(), proof.circuit_id.begin());
    proof.public_inputs = p;
    proof.witness_commitment = commit(w, nonce);
    proof.binding_tag = binding_tag_for(parts->secret, parts->circuit_id, p, proof.witness_commitment);
    return proof;
}

bool verify(std::span<const std::uint8_t> verification_key, const Proof& proof) noexcept {
    try {
        const auto parts = split_key(verification_key);
        if (!parts || !crypto::equal_ct(parts->circuit_id, proof.circuit_id))
            return false;
        const auto expected = binding_tag_for(parts->secret, parts->circuit_id, proof.public_inputs, proof.witness_commitment);
        return crypto::equal_ct(expected, proof.binding_tag);
    } catch (...) {
        return false;
    }
}

bool verify(std::span<const std::uint8_t> verification_key, std::span<const std::uint8_t> proof_bytes) noexcept {
    const auto proof = Proof::deserialize(proof_bytes);
    return proof && verify(verification_key, *proof);
}

Nonce NonceSource::next() {
    Nonce n{};
    for (std::size_t i = 0; i < n.size(); i += 8) {
        const auto v = rng_();
        for (std::size_t b = 0; b < 8; ++b)
            n[i + b] = static_cast<std::uint8_t>(v >> (8 * b));
    }
    return n;
}

LeakAudit leak_audit(std::span<const LabeledProof> proofs) {
    LeakAudit audit;

    const auto first_len = proofs.empty() ? 0 : proofs.front().proof.serialize().size();
    audit.equal_lengths = !proofs.empty() && std::all_of(proofs.begin(), proofs.end(), [&](const LabeledProof& p) {
        return p.proof.serialize().size() == first_len;
    });

    audit.no_flag_field = std::none_of(std::begin(kLayout), std::end(kLayout), [](const ProofField& f) {
        std::string name(f.name);
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        for (const char* banned : {"flag", "buy", "sell", "decision", "bound", "side"})
            if (name.find(banned) != std::string::npos)
                return true;
        return false;
    });

    // Compare every buy/sell pair that shares public inputs.
    std::map<std::tuple<Cents, Cents, Cents>, std::pair<std::vector<Bytes>, std::vector<Bytes>>> groups;
    for (const auto& p : proofs) {
        const auto& in = p.proof.public_inputs;
        auto& g = groups[{in.price, in.upper, in.lower}];
        (p.buy ? g.first : g.second).push_back(p.proof.serialize());
    }
    std::vector<bool> differs(first_len, false);
    for (const auto& [key, g] : groups) {
        if (g.first.empty() || g.second.empty())
            continue;
        audit.precondition_met = true;
        for (const auto& b : g.first)
            for (const auto& s : g.second)
                for (std::size_t i = 0; i < std::min({b.size(), s.size(), differs.size()}); ++i)
                    if (b[i] != s[i])
                        differs[i] = true;
    }
    audit.differences_confined = audit.precondition_met;
    for (std::size_t i = 0; i < differs.size(); ++i) {
        if (!differs[i])
            continue;
        audit.differing_offsets.push_back(i);
        if (i < kCommitmentOffset)
            audit.differences_confined = false;
    }

    const auto mean_commitment_byte = [&](bool buy) {
        double sum = 0;
        std::size_t count = 0;
        for (const auto& p : proofs)
            if (p.buy == buy)
                for (auto b : p.proof.witness_commitment) {
                    sum += b;
                    ++count;
                }
        return count ? sum / static_cast<double>(count) : 0.0;
    };
    audit.buy_commitment_mean = mean_commitment_byte(true);
    audit.sell_commitment_mean = mean_commitment_byte(false);
    audit.commitment_means_close =
        audit.precondition_met &&
        std::abs(audit.buy_commitment_mean - audit.sell_commitment_mean) < kCommitmentMeanGapLimit;
    return audit;
}

} // namespace privbot::zkproof
