#include "privbot/dex_sim.hpp"

#include "privbot/error.hpp"

namespace privbot::dex {
namespace {

Digest leaf_hash(const Vault& v) {
    crypto::ByteWriter w;
    w.put("vault").put_u64(v.id).put_u64(v.owner.size()).put(v.owner).put_u64(v.asset.size()).put(v.asset).put_i64(
        v.balance);
    return crypto::sha256(w.bytes());
}

Digest sign(const Order& o, std::string_view signer) {
    crypto::ByteWriter w;
    w.put("order")
        .put_u64(o.maker_give_vault)
        .put_u64(o.maker_receive_vault)
        .put_u64(o.taker_give_vault)
        .put_u64(o.taker_receive_vault)
        .put(o.taker_give_asset)
        .put(o.taker_receive_asset)
        .put_i64(o.taker_give_amount)
        .put_i64(o.taker_receive_amount)
        .put(signer);
    return crypto::sha256(w.bytes());
}

std::string_view kind_name(EventKind k) { return k == EventKind::Deposit ? "deposit" : "withdrawal"; }

} // namespace

Digest merkle_root(std::span<const Vault> vaults) {
    if (vaults.empty()) {
        crypto::ByteWriter w;
        w.put("empty");
        return crypto::sha256(w.bytes());
    }
    std::vector<Digest> level;
    level.reserve(vaults.size());
    for (const auto& v : vaults)
        level.push_back(leaf_hash(v));
    while (level.size() > 1) {
        if (level.size() % 2 != 0)
            level.push_back(level.back());
        std::vector<Digest> next;
        next.reserve(level.size() / 2);
        for (std::size_t i = 0; i < level.size(); i += 2) {
            crypto::ByteWriter w;
            w.put(level[i]).put(level[i + 1]);
            next.push_back(crypto::sha256(w.bytes()));
        }
        level = std::move(next);
    }
    return level.front();
}

nlohmann::json ObserverView::to_json() const {
    nlohmann::json j;
    j["events"] = nlohmann::json::array();
    for (const auto& e : events)
        j["events"].push_back(
            {{"kind", std::string(kind_name(e.kind))}, {"user", e.user}, {"asset", e.asset}, {"amount", e.amount}});
    j["commitments"] = nlohmann::json::array();
    for (const auto& c : commitments)
        j["commitments"].push_back({{"sequence", c.sequence}, {"state_root", crypto::to_hex(c.state_root)}});
    return j;
}

Dex::Dex(std::string base_asset, std::string quote_asset, std::int64_t slippage_bps, std::string liquidity_provider)
    : base_(std::move(base_asset)), quote_(std::move(quote_asset)), slippage_bps_(slippage_bps),
      provider_(std::move(liquidity_provider)) {
    if (base_.empty() || quote_.empty() || base_ == quote_)
        throw Error(Errc::InvalidArgument, "base and quote assets must be distinct labels");
    if (slippage_bps_ < 0 || slippage_bps_ >= kBpsDenominator)
        throw Error(Errc::InvalidArgument, "slippage must be in [0, 10000) bps");
}

void Dex::check_asset(const std::string& asset) const {
    if (asset != base_ && asset != quote_)
        throw Error(Errc::UnknownAsset, "asset '" + asset + "' is not traded here");
}

std::optional<std::size_t> Dex::find_vault(const std::string& user, const std::string& asset) const {
    const auto it = index_.find({user, asset});
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::size_t Dex::vault_for(const std::string& user, const std::string& asset) {
    if (const auto found = find_vault(user, asset))
        return *found;
    const auto idx = vaults_.size();
    vaults_.push_back({static_cast<std::uint64_t>(idx + 1), user, asset, 0});
    index_[{user, asset}] = idx;
    return idx;
}

std::uint64_t Dex::deposit(const std::string& user, const std::string& asset, std::int64_t amount) {
    check_asset(asset);
    if (amount <= 0)
        throw Error(Errc::ZeroAmount, "deposit amount must be positive");
    auto& v = vaults_[vault_for(user, asset)];
    v.balance += amount;
    deposited_[asset] += amount;
    events_.push_back({EventKind::Deposit, user, asset, amount});
    return v.id;
}

SwapResult Dex::swap(const std::string& user, const std::string& give_asset, std::int64_t give_amount, Cents price,
                     std::optional<std::int64_t> slippage_bps) {
    check_asset(give_asset);
    if (give_amount <= 0)
        throw Error(Errc::ZeroAmount, "swap amount must be positive");
    if (price <= 0)
        throw Error(Errc::InvalidArgument, "price must be positive");
    if (user == provider_)
        throw Error(Errc::InvalidArgument, "the liquidity provider cannot take its own liquidity");
    const auto slip = slippage_bps.value_or(slippage_bps_);
    const bool buying_base = give_asset == quote_;
    const auto& receive_asset = buying_base ? base_ : quote_;

    const auto taker_give = find_vault(user, give_asset);
    if (!taker_give || vaults_[*taker_give].balance < give_amount)
        throw Error(Errc::InsufficientBalance, "taker vault holds less than " + std::to_string(give_amount));

    const auto receive = buying_base ? base_for_quote(give_amount, price, slip) : quote_for_base(give_amount, price, slip);
    if (receive <= 0)
        throw Error(Errc::ZeroAmount, "swap too small to receive anything");
    const auto maker_give = find_vault(provider_, receive_asset);
    if (!maker_give || vaults_[*maker_give].balance < receive)
        throw Error(Errc::InsufficientLiquidity, "liquidity provider cannot fill " + std::to_string(receive));

    const auto taker_receive = vault_for(user, receive_asset);
    const auto maker_receive = vault_for(provider_, give_asset);

    Order order;
    order.maker_give_vault = vaults_[*maker_give].id;
    order.maker_receive_vault = vaults_[maker_receive].id;
    order.taker_give_vault = vaults_[*taker_give].id;
    order.taker_receive_vault = vaults_[taker_receive].id;
    order.taker_give_asset = give_asset;
    order.taker_receive_asset = receive_asset;
    order.taker_give_amount = give_amount;
    order.taker_receive_amount = receive;
    order.maker_signature = sign(order, provider_);
    order.taker_signature = sign(order, user);

    vaults_[*taker_give].balance -= give_amount;
    vaults_[maker_receive].balance += give_amount;
    vaults_[*maker_give].balance -= receive;
    vaults_[taker_receive].balance += receive;
    orders_.push_back(std::move(order));

    BatchCommitment c{commitments_.size() + 1, state_root()};
    commitments_.push_back(c);
    return {receive, c};
}

WithdrawalReceipt Dex::withdraw(const std::string& user, const std::string& asset, std::int64_t amount) {
    check_asset(asset);
    if (amount <= 0)
        throw Error(Errc::ZeroAmount, "withdrawal amount must be positive");
    const auto idx = find_vault(user, asset);
    if (!idx || vaults_[*idx].balance < amount)
        throw Error(Errc::InsufficientBalance, "vault holds less than " + std::to_string(amount));
    auto& v = vaults_[*idx];
    v.balance -= amount;
    withdrawn_[asset] += amount;
    events_.push_back({EventKind::Withdrawal, user, asset, amount});
    return {v.id, amount, v.balance};
}

ObserverView Dex::observer_view() const { return {events_, commitments_}; }

std::int64_t Dex::balance(const std::string& user, const std::string& asset) const {
    const auto idx = find_vault(user, asset);
    return idx ? vaults_[*idx].balance : 0;
}

std::int64_t Dex::deposited(const std::string& asset) const {
    const auto it = deposited_.find(asset);
    return it == deposited_.end() ? 0 : it->second;
}

std::int64_t Dex::withdrawn(const std::string& asset) const {
    const auto it = withdrawn_.find(asset);
    return it == withdrawn_.end() ? 0 : it->second;
}

bool Dex::conserved() const {
    for (const auto& asset : {base_, quote_}) {
        std::int64_t held = 0;
        for (const auto& v : vaults_)
            if (v.asset == asset)
                held += v.balance;
        if (held + withdrawn(asset) - deposited(asset) != 0)
            return false;
    }
    return true;
}

} // namespace privbot::dex
