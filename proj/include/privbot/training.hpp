#pragma once

#include "privbot/indicators.hpp"
#include "privbot/market_data.hpp"
#include "privbot/strategy.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace privbot::training {

using strategy::ParamConfig;

/// Candidate values per parameter axis, each ascending.
struct GridSpace {
    std::vector<std::int64_t> n_values;
    std::vector<std::int64_t> d_values;
    std::vector<std::int64_t> u_values;
    std::vector<std::int64_t> l_values;

    /// {min, mean, max} of each ParamConfig range.
    static GridSpace full_range();
    std::size_t size() const noexcept {
        return n_values.size() * d_values.size() * u_values.size() * l_values.size();
    }
};

/// {min, floor((min + max) / 2), max} ascending, duplicates collapsed.
std::vector<std::int64_t> grid_values(std::int64_t min, std::int64_t max);

/// Cartesian product in lexicographic (n, d, u, l) order. Throws
/// InvalidArgument if a value falls outside the ParamConfig ranges.
std::vector<ParamConfig> enumerate_configs(const GridSpace& space);

struct BacktestOptions {
    std::int64_t fees_bps = 0;
    Cents initial = 100'000;
};

struct BacktestResult {
    ParamConfig config;
    market::PeriodWindow window;
    Cents initial = 0;
    Cents end_balance = 0;
    double return_pct = 0;
    double relative_return_pp = 0;
    std::size_t trade_count = 0;

    friend bool operator==(const BacktestResult&, const BacktestResult&) = default;
};

/// All-in/all-out long-only simulation over the window. Signals are evaluated
/// at every candle of the window that has n candles of history in the series
/// (history may reach before the window start). A buy spends the whole quote
/// balance, a sell the whole base balance; a signal with nothing to spend is a
/// no-op. The result is marked to market at the window's last close and
/// carries the percentage-point gap to buy-and-hold.
BacktestResult backtest(const market::PriceSeries& series, const market::PeriodWindow& window,
                        const ParamConfig& config, std::int64_t fees_bps = 0, Cents initial = 100'000);

/// Buy at the first close of the window, mark at the last.
BacktestResult buy_and_hold(const market::PriceSeries& series, const market::PeriodWindow& window,
                            Cents initial = 100'000);

/// strategy.return_pct - baseline.return_pct; WindowMismatch unless both ran
/// over the same window from the same initial balance.
double relative_return(const BacktestResult& strategy, const BacktestResult& baseline);

/// Mean excess return over population stddev of excess returns.
double sharpe(std::span<const double> returns, double riskless = 0.0);

/// Population statistics of a non-empty sample.
struct SampleStats {
    double max = 0;
    double min = 0;
    double mean = 0;
    double stddev = 0;
};
SampleStats sample_stats(std::span<const double> xs);

/// Rolling moments for each moving-average length in a grid, shared read-only
/// across concurrent backtests.
class BandCache {
public:
    BandCache(const market::PriceSeries& series, std::span<const std::int64_t> n_values);
    std::span<const std::optional<indicators::Moments>> moments(std::int64_t n) const;

private:
    std::vector<std::int64_t> ns_;
    std::vector<std::vector<std::optional<indicators::Moments>>> moments_;
};

BacktestResult backtest_cached(const market::PriceSeries& series, const BandCache& cache,
                               const market::PeriodWindow& window, const ParamConfig& config,
                               const BacktestOptions& options);

enum class RankMethod { SharpeRatio, AverageReturn };

std::string_view method_name(RankMethod m) noexcept;
std::optional<RankMethod> parse_method(std::string_view text) noexcept;

struct ConfigReturns {
    ParamConfig config;
    std::vector<double> returns; // relative return per window, in window order
};

struct ReportRow {
    std::optional<ParamConfig> config; // empty for the overall row
    SampleStats stats;
    std::optional<double> score;
    std::vector<double> samples;

    std::string label() const { return config ? config->label() : "overall"; }
};

struct RankingReport {
    RankMethod method = RankMethod::AverageReturn;
    std::vector<ReportRow> rows;
    ReportRow overall;
};

/// Scores each config (Sharpe with zero riskless rate, or mean), keeps the
/// top k by score descending with ties broken by ascending config, and adds an
/// overall row over the union of the kept rows' samples. Under Sharpe a config
/// whose returns have zero variance cannot be scored and is left out;
/// ZeroVariance is thrown only when that leaves nothing.
RankingReport rank(std::span<const ConfigReturns> results, RankMethod method, std::size_t k);

/// Backtests every ranked config over the test windows; rows keep the ranking
/// order and carry no score.
RankingReport evaluate(const RankingReport& top, const market::PriceSeries& series,
                       std::span<const market::PeriodWindow> test_windows, const BacktestOptions& options = {},
                       unsigned threads = 0);

struct TrainOptions {
    GridSpace space = GridSpace::full_range();
    RankMethod method = RankMethod::AverageReturn;
    std::size_t top_k = 5;
    BacktestOptions backtest;
    unsigned threads = 0;
};

/// Relative returns of every config over every window, merged in
/// (config, window) order regardless of thread count.
std::vector<ConfigReturns> grid_returns(const market::PriceSeries& series, std::span<const ParamConfig> configs,
                                        std::span<const market::PeriodWindow> windows,
                                        const BacktestOptions& options, unsigned threads = 0);

RankingReport train(const market::PriceSeries& series, std::span<const market::PeriodWindow> train_windows,
                    const TrainOptions& options);

struct PeriodStudy {
    std::int64_t period_seconds = 0;
    std::size_t train_windows = 0;
    std::size_t test_windows = 0;
    RankingReport training;
    RankingReport testing;
};

/// For each trading period: resample, reselect and resplit windows, train,
/// then evaluate on the test windows.
std::vector<PeriodStudy> frequency_study(const market::PriceSeries& series, std::span<const std::int64_t> periods,
                                         const TrainOptions& options,
                                         std::int64_t stride_seconds = market::kDefaultStrideSeconds);

nlohmann::json to_json(const RankingReport& report);
RankingReport ranking_from_json(const nlohmann::json& j);
/// `config,max,min,mean,stddev`, four decimals, overall row last.
std::string to_csv(const RankingReport& report);

} // namespace privbot::training
