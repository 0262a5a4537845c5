#pragma once

#include "privbot/market_data.hpp"
#include "privbot/money.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace privbot::indicators {

/// Bollinger bands in integer cents. The mean and the standard deviation are
/// the exact population values truncated toward zero; the bands are built from
/// those truncated values.
struct BollingerBands {
    Cents sma = 0;
    Cents stddev = 0;
    Cents upper = 0;
    Cents lower = 0;

    friend bool operator==(const BollingerBands&, const BollingerBands&) = default;
};

/// floor(sqrt(v)) for v >= 0.
std::uint64_t isqrt(unsigned __int128 v);

/// Mean and population stddev of a window of closes, both truncated.
struct Moments {
    Cents mean = 0;
    Cents stddev = 0;
};
Moments window_moments(std::span<const Cents> closes);

BollingerBands bands_from(Moments m, std::int64_t d);

Cents sma(const market::PriceSeries& series, std::int64_t at, std::size_t window_n);
BollingerBands bollinger(const market::PriceSeries& series, std::int64_t at, std::size_t n, std::int64_t d);

/// Rolling moments for every candle of a series; entry i is empty until n
/// candles end at i. Computed with exact running sums, so each entry equals
/// window_moments over the same closes.
std::vector<std::optional<Moments>> rolling_moments(const market::PriceSeries& series, std::size_t n);

} // namespace privbot::indicators
