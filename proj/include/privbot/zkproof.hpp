#pragma once

#include "privbot/crypto.hpp"
#include "privbot/strategy.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Simulation-grade decision proofs. A proof carries the public inputs in
// plaintext, a hiding commitment to the private witness, and a tag binding
// both under the setup secret. Anyone holding the proving key can forge.
namespace privbot::zkproof {

using crypto::Bytes;
using crypto::Digest;
using strategy::PublicParams;

inline constexpr std::string_view kCircuitId = "bollinger-v1";
inline constexpr std::size_t kProofSize = 32 + 8 + 8 + 8 + 32 + 32;

using Nonce = std::array<std::uint8_t, 16>;

/// Private inputs: flag 1 proves a buy, 0 a sell; the bound is the L or U
/// threshold in use.
struct Witness {
    std::int64_t buy_sell_flag = 0;
    std::int64_t bound_percentage = 0;

    bool valid() const noexcept;
};

/// The single decision program every proof in a deployment is checked
/// against. There is exactly one instance.
class DecisionCircuit {
public:
    static const DecisionCircuit& instance();

    std::string_view id() const noexcept { return kCircuitId; }
    /// Id padded with zero bytes to 32.
    const std::array<std::uint8_t, 32>& id_bytes() const noexcept { return id_bytes_; }
    /// Human-readable program text published next to the verification key.
    std::string_view source() const noexcept;

    bool eval(const PublicParams& p, const Witness& w) const noexcept;

    DecisionCircuit(const DecisionCircuit&) = delete;
    DecisionCircuit& operator=(const DecisionCircuit&) = delete;

private:
    DecisionCircuit();
    std::array<std::uint8_t, 32> id_bytes_{};
};

bool circuit_eval(const PublicParams& p, const Witness& w) noexcept;

/// Witness that proves `decision` under `config`; empty for Hold.
std::optional<Witness> witness_for(strategy::TradeDecision decision, const strategy::ParamConfig& config) noexcept;

struct SetupKeys {
    Bytes proving_key;      // [circuit_id:32][secret:32]
    Bytes verification_key; // [circuit_id:32][secret:32][circuit source]

    friend bool operator==(const SetupKeys&, const SetupKeys&) = default;
};

/// Deterministic in the seed; distinct seeds give unrelated secrets.
SetupKeys setup(std::span<const std::uint8_t> rng_seed);
SetupKeys setup(std::string_view rng_seed);

/// Circuit source text embedded in a verification key, if well formed.
std::optional<std::string> published_source(std::span<const std::uint8_t> verification_key);

struct Proof {
    std::array<std::uint8_t, 32> circuit_id{};
    PublicParams public_inputs;
    Digest witness_commitment{};
    Digest binding_tag{};

    /// `[circuit_id:32][price:8][upper:8][lower:8][commitment:32][tag:32]`,
    /// integers little-endian.
    Bytes serialize() const;
    static std::optional<Proof> deserialize(std::span<const std::uint8_t> bytes);

    friend bool operator==(const Proof&, const Proof&) = default;
};

struct ProofField {
    std::string_view name;
    std::size_t offset;
    std::size_t size;
};
std::span<const ProofField> proof_layout() noexcept;

/// Throws ConstraintUnsatisfied when the witness does not prove a decision on
/// these public inputs, InvalidWitness for out-of-range witnesses and
/// InvalidArgument for a malformed key.
Proof prove(std::span<const std::uint8_t> proving_key, const PublicParams& p, const Witness& w, const Nonce& nonce);

/// Never throws; malformed keys or proofs verify as false.
bool verify(std::span<const std::uint8_t> verification_key, const Proof& proof) noexcept;
bool verify(std::span<const std::uint8_t> verification_key, std::span<const std::uint8_t> proof_bytes) noexcept;

/// Seedable 128-bit nonce generator.
class NonceSource {
public:
    explicit NonceSource(std::uint64_t seed) : rng_(seed) {}
    Nonce next();

private:
    std::mt19937_64 rng_;
};

/// A proof with the decision it was built for, known only to the auditor.
struct LabeledProof {
    Proof proof;
    bool buy = false;
};

struct LeakAudit {
    bool precondition_met = false;
    bool equal_lengths = false;
    bool no_flag_field = false;
    /// Buy/sell pairs with identical public inputs differ only inside the
    /// commitment and tag bytes.
    bool differences_confined = false;
    std::vector<std::size_t> differing_offsets;
    double buy_commitment_mean = 0;
    double sell_commitment_mean = 0;
    /// |mean byte gap| below the threshold of 8 (out of a 127.5 midpoint).
    bool commitment_means_close = false;

    bool passed() const noexcept {
        return precondition_met && equal_lengths && no_flag_field && differences_confined && commitment_means_close;
    }
};

inline constexpr double kCommitmentMeanGapLimit = 8.0;

/// Needs at least one buy and one sell sharing public inputs; otherwise the
/// report has precondition_met = false.
LeakAudit leak_audit(std::span<const LabeledProof> proofs);

} // namespace privbot::zkproof
