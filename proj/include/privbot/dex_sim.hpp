#pragma once

#include "privbot/crypto.hpp"
#include "privbot/money.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace privbot::dex {

using crypto::Digest;

/// Single-asset, single-owner balance account. Quote balances are cents,
/// base balances are 1e-8 minor units.
struct Vault {
    std::uint64_t id = 0;
    std::string owner;
    std::string asset;
    std::int64_t balance = 0;
};

/// Maker-taker order as held by the off-chain sequencer. Never published.
struct Order {
    std::uint64_t maker_give_vault = 0;
    std::uint64_t maker_receive_vault = 0;
    std::uint64_t taker_give_vault = 0;
    std::uint64_t taker_receive_vault = 0;
    std::string taker_give_asset;
    std::string taker_receive_asset;
    std::int64_t taker_give_amount = 0;
    std::int64_t taker_receive_amount = 0;
    Digest maker_signature{};
    Digest taker_signature{};
};

struct BatchCommitment {
    std::uint64_t sequence = 0;
    Digest state_root{};

    friend bool operator==(const BatchCommitment&, const BatchCommitment&) = default;
};

enum class EventKind { Deposit, Withdrawal };

/// On-chain deposit or withdrawal, visible to everyone.
struct PublicEvent {
    EventKind kind = EventKind::Deposit;
    std::string user;
    std::string asset;
    std::int64_t amount = 0;

    friend bool operator==(const PublicEvent&, const PublicEvent&) = default;
};

/// Everything a chain observer can see. Holds only public events and state
/// commitments; there is no field an order could go into.
struct ObserverView {
    std::vector<PublicEvent> events;
    std::vector<BatchCommitment> commitments;

    nlohmann::json to_json() const;
};

struct SwapResult {
    std::int64_t receive_amount = 0;
    BatchCommitment commitment; // post-trade root, usable as an inclusion receipt
};

struct WithdrawalReceipt {
    std::uint64_t vault_id = 0;
    std::int64_t amount = 0;
    std::int64_t remaining = 0;
};

/// Merkle root over vault leaves in id order; odd levels duplicate their last
/// node.
Digest merkle_root(std::span<const Vault> vaults);

/// Validium-style exchange for one base/quote pair. Trades settle off-chain
/// against a liquidity provider that must itself hold deposited funds, so
/// every asset is conserved. One vault per (user, asset), created on first
/// deposit.
class Dex {
public:
    Dex(std::string base_asset, std::string quote_asset, std::int64_t slippage_bps = 0,
        std::string liquidity_provider = "liquidity-provider");

    std::uint64_t deposit(const std::string& user, const std::string& asset, std::int64_t amount);

    /// Taker swap of `give_amount` of `give_asset` at `price` (quote cents per
    /// base unit) worsened by slippage against the taker. Appends one batch
    /// commitment. Throws InsufficientBalance, InsufficientLiquidity,
    /// UnknownAsset or ZeroAmount.
    SwapResult swap(const std::string& user, const std::string& give_asset, std::int64_t give_amount, Cents price,
                    std::optional<std::int64_t> slippage_bps = std::nullopt);

    WithdrawalReceipt withdraw(const std::string& user, const std::string& asset, std::int64_t amount);

    ObserverView observer_view() const;

    std::int64_t balance(const std::string& user, const std::string& asset) const;
    std::span<const Vault> vaults() const noexcept { return vaults_; }
    /// Sequencer-side order log; not part of the observer view.
    std::span<const Order> sequencer_log() const noexcept { return orders_; }
    Digest state_root() const { return merkle_root(vaults_); }

    std::int64_t deposited(const std::string& asset) const;
    std::int64_t withdrawn(const std::string& asset) const;
    /// Per asset: sum of vault balances + withdrawn - deposited == 0.
    bool conserved() const;

    const std::string& base_asset() const noexcept { return base_; }
    const std::string& quote_asset() const noexcept { return quote_; }
    const std::string& liquidity_provider() const noexcept { return provider_; }
    std::int64_t slippage_bps() const noexcept { return slippage_bps_; }

private:
    std::optional<std::size_t> find_vault(const std::string& user, const std::string& asset) const;
    std::size_t vault_for(const std::string& user, const std::string& asset);
    void check_asset(const std::string& asset) const;

    std::string base_;
    std::string quote_;
    std::int64_t slippage_bps_;
    std::string provider_;
    std::vector<Vault> vaults_;
    std::map<std::pair<std::string, std::string>, std::size_t> index_;
    std::vector<PublicEvent> events_;
    std::vector<BatchCommitment> commitments_;
    std::vector<Order> orders_;
    std::map<std::string, std::int64_t> deposited_;
    std::map<std::string, std::int64_t> withdrawn_;
};

} // namespace privbot::dex
