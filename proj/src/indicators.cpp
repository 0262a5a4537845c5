#include "privbot/indicators.hpp"

#include "privbot/error.hpp"

#include <cmath>

namespace privbot::indicators {
namespace {

using u128 = unsigned __int128;
using i128 = __int128;

// floor(sqrt(n * sumsq - sum^2) / n) = floor(isqrt(n * sumsq - sum^2) / n)
Moments moments_from_sums(i128 sum, i128 sumsq, std::int64_t n) {
    const i128 spread = n * sumsq - sum * sum;
    Moments m;
    m.mean = static_cast<Cents>(sum / n);
    m.stddev = static_cast<Cents>(isqrt(static_cast<u128>(spread)) / static_cast<std::uint64_t>(n));
    return m;
}

std::size_t checked_index(const market::PriceSeries& series, std::int64_t at, std::size_t n) {
    if (n == 0)
        throw Error(Errc::InvalidArgument, "window length must be at least 1");
    const auto idx = series.index_of(at);
    if (!idx)
        throw Error(Errc::UnknownTimestamp, "no candle at " + std::to_string(at), at);
    if (*idx + 1 < n)
        throw Error(Errc::InsufficientHistory,
                    std::to_string(n) + " candles requested but only " + std::to_string(*idx + 1) + " end at " +
                        std::to_string(at),
                    at);
    return *idx;
}

} // namespace

std::uint64_t isqrt(u128 v) {
    if (v == 0)
        return 0;
    auto r = static_cast<u128>(std::sqrt(static_cast<long double>(v)));
    while (r * r > v)
        --r;
    while ((r + 1) * (r + 1) <= v)
        ++r;
    return static_cast<std::uint64_t>(r);
}

Moments window_moments(std::span<const Cents> closes) {
    if (closes.empty())
        throw Error(Errc::InsufficientHistory, "empty window");
    i128 sum = 0;
    i128 sumsq = 0;
    for (auto x : closes) {
        sum += x;
        sumsq += static_cast<i128>(x) * x;
    }
    return moments_from_sums(sum, sumsq, static_cast<std::int64_t>(closes.size()));
}

BollingerBands bands_from(Moments m, std::int64_t d) {
    if (d < 0)
        throw Error(Errc::InvalidArgument, "band width d must be non-negative");
    return {m.mean, m.stddev, m.mean + d * m.stddev, m.mean - d * m.stddev};
}

Cents sma(const market::PriceSeries& series, std::int64_t at, std::size_t window_n) {
    const auto idx = checked_index(series, at, window_n);
    i128 sum = 0;
    for (std::size_t i = idx + 1 - window_n; i <= idx; ++i)
        sum += series[i].close;
    return static_cast<Cents>(sum / static_cast<std::int64_t>(window_n));
}

BollingerBands bollinger(const market::PriceSeries& series, std::int64_t at, std::size_t n, std::int64_t d) {
    const auto idx = checked_index(series, at, n);
    const auto closes = series.closes();
    return bands_from(window_moments(std::span(closes).subspan(idx + 1 - n, n)), d);
}

std::vector<std::optional<Moments>> rolling_moments(const market::PriceSeries& series, std::size_t n) {
    if (n == 0)
        throw Error(Errc::InvalidArgument, "window length must be at least 1");
    std::vector<std::optional<Moments>> out(series.size());
    i128 sum = 0;
    i128 sumsq = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const i128 x = series[i].close;
        sum += x;
        sumsq += x * x;
        if (i >= n) {
            const i128 old = series[i - n].close;
            sum -= old;
            sumsq -= old * old;
        }
        if (i + 1 >= n)
            out[i] = moments_from_sums(sum, sumsq, static_cast<std::int64_t>(n));
    }
    return out;
}

} // namespace privbot::indicators
