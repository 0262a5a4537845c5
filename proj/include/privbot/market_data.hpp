#pragma once

#include "privbot/money.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace privbot::market {

inline constexpr std::int64_t kSecondsPerDay = 86'400;
inline constexpr std::int64_t kWindowSeconds = 30 * kSecondsPerDay;
inline constexpr std::int64_t kDefaultStrideSeconds = kSecondsPerDay;

struct Candle {
    std::int64_t timestamp = 0;
    Cents close = 0;
    // Informational only; nothing downstream reads them.
    std::optional<Cents> open;
    std::optional<Cents> high;
    std::optional<Cents> low;
    std::optional<double> volume;

    friend bool operator==(const Candle&, const Candle&) = default;
};

/// Uniformly spaced, strictly increasing close prices for one asset pair.
/// The constructor enforces every invariant, so a PriceSeries value is always
/// well formed.
class PriceSeries {
public:
    PriceSeries(std::string pair, std::int64_t period_seconds, std::vector<Candle> candles);

    const std::string& pair() const noexcept { return pair_; }
    std::int64_t period_seconds() const noexcept { return period_; }
    std::span<const Candle> candles() const noexcept { return candles_; }
    std::size_t size() const noexcept { return candles_.size(); }
    const Candle& operator[](std::size_t i) const { return candles_[i]; }

    std::int64_t first_timestamp() const noexcept { return candles_.front().timestamp; }
    std::int64_t last_timestamp() const noexcept { return candles_.back().timestamp; }

    /// Index of the candle stamped exactly `timestamp`, if any.
    std::optional<std::size_t> index_of(std::int64_t timestamp) const noexcept;
    /// Index of the last candle stamped at or before `timestamp`, if any.
    std::optional<std::size_t> index_at_or_before(std::int64_t timestamp) const noexcept;

    std::vector<Cents> closes() const;

    friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

private:
    std::string pair_;
    std::int64_t period_;
    std::vector<Candle> candles_;
};

enum class PeriodRole { Train, Test };

std::string_view role_name(PeriodRole role) noexcept;

struct PeriodWindow {
    std::int64_t start = 0;
    std::int64_t end = 0;
    PeriodRole role = PeriodRole::Train;

    friend bool operator==(const PeriodWindow&, const PeriodWindow&) = default;
};

struct PeriodSplit {
    std::vector<PeriodWindow> train;
    std::vector<PeriodWindow> test;
};

/// Decimal price text to cents, rounding half to even. Returns nullopt for
/// anything that is not a plain non-negative decimal.
std::optional<Cents> parse_price_cents(std::string_view text);

/// Reads a CSV with a header row. Columns are matched by name; `timestamp`
/// and `close` are required, `open,high,low,volume` optional. Rows may come in
/// any order and are sorted before the spacing check.
PriceSeries parse_candles(std::istream& in, std::string pair, std::int64_t period_seconds);
PriceSeries load_candles(const std::filesystem::path& path, std::string pair, std::int64_t period_seconds);

/// `timestamp,open,high,low,close,volume` with prices as decimals.
std::string to_csv(const PriceSeries& series);
std::string format_cents(Cents cents);

/// Groups consecutive candles into buckets of new_period / period, starting at
/// the first candle. A bucket keeps its first timestamp and its last close;
/// the partial trailing bucket is dropped.
PriceSeries resample(const PriceSeries& series, std::int64_t new_period_seconds);

/// Every 30-day window (stride `step_seconds`, starting at the first candle)
/// whose last close is strictly below its first close.
std::vector<PeriodWindow> select_periods(const PriceSeries& series, std::int64_t step_seconds = kDefaultStrideSeconds);

/// First ceil(n/2) windows become Train, the rest Test.
PeriodSplit split_periods(std::span<const PeriodWindow> windows);

/// Candle index range [first, last] covered by a window.
struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;
};
IndexRange window_indices(const PriceSeries& series, const PeriodWindow& window);

struct RandomWalkSpec {
    std::string pair = "ETH:USDC";
    std::uint64_t seed = 1;
    std::int64_t start_timestamp = 0;
    std::int64_t period_seconds = 600;
    std::size_t count = 1000;
    Cents start_price = 300'000;
    double drift_per_step = 0.0;  // mean log return per candle
    double vol_per_step = 0.005;  // log return standard deviation per candle
};

/// Seeded geometric random walk, closes rounded to cents (minimum 1 cent).
PriceSeries generate_random_walk(const RandomWalkSpec& spec);

} // namespace privbot::market
