#include "privbot/training.hpp"

#include "privbot/error.hpp"
#include "privbot/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace privbot::training {
namespace {

std::int64_t floor_div2(std::int64_t v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); }

double pct_change(Cents from, Cents to) {
    return (static_cast<double>(to) - static_cast<double>(from)) / static_cast<double>(from) * 100.0;
}

void check_initial(Cents initial) {
    if (initial <= 0)
        throw Error(Errc::InvalidArgument, "initial balance must be positive");
}

struct Outcome {
    Cents end_balance = 0;
    std::size_t trades = 0;
};

Outcome simulate(const market::PriceSeries& series, market::IndexRange range,
                 std::span<const std::optional<indicators::Moments>> moments, const ParamConfig& config,
                 const BacktestOptions& options) {
    Cents quote = options.initial;
    BaseUnits base = 0;
    std::size_t trades = 0;
    for (auto i = range.first; i <= range.last; ++i) {
        if (!moments[i])
            continue;
        const auto bands = indicators::bands_from(*moments[i], config.d);
        const strategy::PublicParams p{series[i].close, bands.upper, bands.lower};
        switch (strategy::decide(p, config)) {
        case strategy::TradeDecision::Buy:
            if (quote > 0) {
                base += base_for_quote(quote - fee_for(quote, options.fees_bps), p.price);
                quote = 0;
                ++trades;
            }
            break;
        case strategy::TradeDecision::Sell:
            if (base > 0) {
                const auto proceeds = quote_for_base(base, p.price);
                quote += proceeds - fee_for(proceeds, options.fees_bps);
                base = 0;
                ++trades;
            }
            break;
        case strategy::TradeDecision::Hold: break;
        }
    }
    return {mark_to_market(quote, base, series[range.last].close), trades};
}

BacktestResult baseline(const market::PriceSeries& series, const market::PeriodWindow& window,
                        market::IndexRange range, Cents initial) {
    const auto base = base_for_quote(initial, series[range.first].close);
    BacktestResult r;
    r.window = window;
    r.initial = initial;
    r.end_balance = quote_for_base(base, series[range.last].close);
    r.return_pct = pct_change(initial, r.end_balance);
    r.relative_return_pp = 0;
    r.trade_count = 1;
    return r;
}

void put_fixed4(std::ostringstream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    out << buf;
}

ReportRow row_from_samples(std::optional<ParamConfig> config, std::vector<double> samples,
                           std::optional<double> score) {
    ReportRow row;
    row.config = config;
    row.stats = sample_stats(samples);
    row.score = score;
    row.samples = std::move(samples);
    return row;
}

ReportRow overall_row(const std::vector<ReportRow>& rows) {
    std::vector<double> all;
    for (const auto& r : rows)
        all.insert(all.end(), r.samples.begin(), r.samples.end());
    if (all.empty())
        return ReportRow{};
    return row_from_samples(std::nullopt, std::move(all), std::nullopt);
}

} // namespace

GridSpace GridSpace::full_range() {
    return {grid_values(ParamConfig::kMinN, ParamConfig::kMaxN), grid_values(ParamConfig::kMinD, ParamConfig::kMaxD),
            grid_values(ParamConfig::kMinPct, ParamConfig::kMaxPct),
            grid_values(ParamConfig::kMinPct, ParamConfig::kMaxPct)};
}

std::vector<std::int64_t> grid_values(std::int64_t min, std::int64_t max) {
    if (min > max)
        throw Error(Errc::InvalidRange, "min " + std::to_string(min) + " exceeds max " + std::to_string(max));
    std::vector<std::int64_t> out{min, floor_div2(min + max), max};
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<ParamConfig> enumerate_configs(const GridSpace& space) {
    std::vector<ParamConfig> out;
    out.reserve(space.size());
    for (auto n : space.n_values)
        for (auto d : space.d_values)
            for (auto u : space.u_values)
                for (auto l : space.l_values)
                    out.push_back(ParamConfig{n, d, u, l}.validated());
    return out;
}

BandCache::BandCache(const market::PriceSeries& series, std::span<const std::int64_t> n_values) {
    for (auto n : n_values) {
        if (n <= 0)
            throw Error(Errc::InvalidArgument, "moving-average length must be positive");
        if (std::find(ns_.begin(), ns_.end(), n) != ns_.end())
            continue;
        ns_.push_back(n);
        moments_.push_back(indicators::rolling_moments(series, static_cast<std::size_t>(n)));
    }
}

std::span<const std::optional<indicators::Moments>> BandCache::moments(std::int64_t n) const {
    const auto it = std::find(ns_.begin(), ns_.end(), n);
    if (it == ns_.end())
        throw Error(Errc::InvalidArgument, "band cache has no entry for n=" + std::to_string(n));
    return moments_[static_cast<std::size_t>(it - ns_.begin())];
}

BacktestResult backtest_cached(const market::PriceSeries& series, const BandCache& cache,
                               const market::PeriodWindow& window, const ParamConfig& config,
                               const BacktestOptions& options) {
    check_initial(options.initial);
    config.validated();
    const auto range = market::window_indices(series, window);
    const auto outcome = simulate(series, range, cache.moments(config.n), config, options);
    const auto hold = baseline(series, window, range, options.initial);

    BacktestResult r;
    r.config = config;
    r.window = window;
    r.initial = options.initial;
    r.end_balance = outcome.end_balance;
    r.return_pct = pct_change(options.initial, outcome.end_balance);
    r.relative_return_pp = r.return_pct - hold.return_pct;
    r.trade_count = outcome.trades;
    return r;
}

BacktestResult backtest(const market::PriceSeries& series, const market::PeriodWindow& window,
                        const ParamConfig& config, std::int64_t fees_bps, Cents initial) {
    config.validated();
    const std::int64_t n[] = {config.n};
    const BandCache cache(series, n);
    return backtest_cached(series, cache, window, config, {fees_bps, initial});
}

BacktestResult buy_and_hold(const market::PriceSeries& series, const market::PeriodWindow& window, Cents initial) {
    check_initial(initial);
    return baseline(series, window, market::window_indices(series, window), initial);
}

double relative_return(const BacktestResult& strategy, const BacktestResult& baseline) {
    if (strategy.window.start != baseline.window.start || strategy.window.end != baseline.window.end ||
        strategy.initial != baseline.initial)
        throw Error(Errc::WindowMismatch, "results cover different windows or initial balances");
    return strategy.return_pct - baseline.return_pct;
}

SampleStats sample_stats(std::span<const double> xs) {
    if (xs.empty())
        throw Error(Errc::TooFewSamples, "statistics of an empty sample");
    SampleStats s;
    s.max = *std::max_element(xs.begin(), xs.end());
    s.min = *std::min_element(xs.begin(), xs.end());
    s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double ss = 0;
    for (auto x : xs)
        ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size()));
    return s;
}

double sharpe(std::span<const double> returns, double riskless) {
    if (returns.size() < 2)
        throw Error(Errc::TooFewSamples, "Sharpe ratio needs at least two returns");
    std::vector<double> excess(returns.begin(), returns.end());
    for (auto& x : excess)
        x -= riskless;
    const bool all_equal =
        std::all_of(excess.begin(), excess.end(), [&](double x) { return x == excess.front(); });
    const auto stats = sample_stats(excess);
    if (all_equal || stats.stddev == 0.0)
        throw Error(Errc::ZeroVariance, "returns have zero variance");
    return stats.mean / stats.stddev;
}

std::string_view method_name(RankMethod m) noexcept {
    return m == RankMethod::SharpeRatio ? "sharpe" : "avg";
}

std::optional<RankMethod> parse_method(std::string_view text) noexcept {
    if (text == "sharpe")
        return RankMethod::SharpeRatio;
    if (text == "avg")
        return RankMethod::AverageReturn;
    return std::nullopt;
}

RankingReport rank(std::span<const ConfigReturns> results, RankMethod method, std::size_t k) {
    if (results.empty())
        throw Error(Errc::EmptyList, "no configurations to rank");
    struct Scored {
        double score;
        const ConfigReturns* entry;
    };
    std::vector<Scored> scored;
    scored.reserve(results.size());
    for (const auto& r : results) {
        if (r.returns.empty())
            throw Error(Errc::TooFewSamples, "config " + r.config.label() + " has no window results");
        if (method == RankMethod::AverageReturn) {
            scored.push_back({sample_stats(r.returns).mean, &r});
            continue;
        }
        try {
            scored.push_back({sharpe(r.returns), &r});
        } catch (const Error& e) {
            if (e.code() != Errc::ZeroVariance)
                throw;
        }
    }
    if (scored.empty())
        throw Error(Errc::ZeroVariance, "every configuration has zero-variance returns");
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score)
            return a.score > b.score;
        return a.entry->config < b.entry->config;
    });

    RankingReport report;
    report.method = method;
    const auto keep = std::min(k, scored.size());
    for (std::size_t i = 0; i < keep; ++i)
        report.rows.push_back(row_from_samples(scored[i].entry->config, scored[i].entry->returns, scored[i].score));
    report.overall = overall_row(report.rows);
    return report;
}

std::vector<ConfigReturns> grid_returns(const market::PriceSeries& series, std::span<const ParamConfig> configs,
                                        std::span<const market::PeriodWindow> windows,
                                        const BacktestOptions& options, unsigned threads) {
    std::vector<std::int64_t> ns;
    for (const auto& c : configs)
        ns.push_back(c.n);
    const BandCache cache(series, ns);

    const auto n_windows = windows.size();
    std::vector<double> flat(configs.size() * n_windows);
    parallel_for(flat.size(), threads, [&](std::size_t job) {
        const auto& config = configs[job / n_windows];
        const auto& window = windows[job % n_windows];
        flat[job] = backtest_cached(series, cache, window, config, options).relative_return_pp;
    });

    std::vector<ConfigReturns> out;
    out.reserve(configs.size());
    for (std::size_t c = 0; c < configs.size(); ++c) {
        const auto first = flat.begin() + static_cast<std::ptrdiff_t>(c * n_windows);
        out.push_back({configs[c], std::vector<double>(first, first + static_cast<std::ptrdiff_t>(n_windows))});
    }
    return out;
}

RankingReport train(const market::PriceSeries& series, std::span<const market::PeriodWindow> train_windows,
                    const TrainOptions& options) {
    if (train_windows.empty())
        throw Error(Errc::EmptyList, "no training windows");
    const auto configs = enumerate_configs(options.space);
    const auto results = grid_returns(series, configs, train_windows, options.backtest, options.threads);
    return rank(results, options.method, options.top_k);
}

RankingReport evaluate(const RankingReport& top, const market::PriceSeries& series,
                       std::span<const market::PeriodWindow> test_windows, const BacktestOptions& options,
                       unsigned threads) {
    if (test_windows.empty())
        throw Error(Errc::EmptyTestSet, "no test windows to evaluate on");
    std::vector<ParamConfig> configs;
    for (const auto& row : top.rows) {
        if (!row.config)
            throw Error(Errc::InvalidArgument, "ranking row without a config");
        configs.push_back(*row.config);
    }
    const auto results = grid_returns(series, configs, test_windows, options, threads);

    RankingReport report;
    report.method = top.method;
    for (const auto& r : results)
        report.rows.push_back(row_from_samples(r.config, r.returns, std::nullopt));
    report.overall = overall_row(report.rows);
    return report;
}

std::vector<PeriodStudy> frequency_study(const market::PriceSeries& series, std::span<const std::int64_t> periods,
                                         const TrainOptions& options, std::int64_t stride_seconds) {
    if (periods.empty())
        throw Error(Errc::EmptyList, "no trading periods given");
    std::vector<PeriodStudy> out;
    for (auto period : periods) {
        const auto resampled = market::resample(series, period);
        const auto windows = market::select_periods(resampled, stride_seconds);
        const auto split = market::split_periods(windows);
        PeriodStudy study;
        study.period_seconds = period;
        study.train_windows = split.train.size();
        study.test_windows = split.test.size();
        study.training = train(resampled, split.train, options);
        study.testing = evaluate(study.training, resampled, split.test, options.backtest, options.threads);
        out.push_back(std::move(study));
    }
    return out;
}

namespace {

nlohmann::json row_json(const ReportRow& row) {
    nlohmann::json j;
    j["config"] = row.label();
    j["max"] = row.stats.max;
    j["min"] = row.stats.min;
    j["mean"] = row.stats.mean;
    j["stddev"] = row.stats.stddev;
    j["score"] = row.score ? nlohmann::json(*row.score) : nlohmann::json(nullptr);
    j["samples"] = row.samples;
    return j;
}

ReportRow row_from_json(const nlohmann::json& j) {
    ReportRow row;
    const auto label = j.at("config").get<std::string>();
    if (label != "overall") {
        row.config = ParamConfig::parse(label);
        if (!row.config)
            throw Error(Errc::BadConfig, "bad config label " + label);
    }
    row.stats = {j.at("max").get<double>(), j.at("min").get<double>(), j.at("mean").get<double>(),
                 j.at("stddev").get<double>()};
    if (j.contains("score") && !j["score"].is_null())
        row.score = j["score"].get<double>();
    if (j.contains("samples"))
        row.samples = j["samples"].get<std::vector<double>>();
    return row;
}

} // namespace

nlohmann::json to_json(const RankingReport& report) {
    nlohmann::json j;
    j["method"] = std::string(method_name(report.method));
    j["rows"] = nlohmann::json::array();
    for (const auto& row : report.rows)
        j["rows"].push_back(row_json(row));
    j["overall"] = row_json(report.overall);
    return j;
}

RankingReport ranking_from_json(const nlohmann::json& j) {
    try {
        RankingReport report;
        const auto method = parse_method(j.at("method").get<std::string>());
        if (!method)
            throw Error(Errc::BadConfig, "unknown ranking method");
        report.method = *method;
        for (const auto& row : j.at("rows"))
            report.rows.push_back(row_from_json(row));
        report.overall = row_from_json(j.at("overall"));
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::BadConfig, std::string("malformed ranking report: ") + e.what());
    }
}

std::string to_csv(const RankingReport& report) {
    std::ostringstream out;
    out << "config,max,min,mean,stddev\n";
    const auto line = [&](const ReportRow& row) {
        out << row.label() << ',';
        put_fixed4(out, row.stats.max);
        out << ',';
        put_fixed4(out, row.stats.min);
        out << ',';
        put_fixed4(out, row.stats.mean);
        out << ',';
        put_fixed4(out, row.stats.stddev);
        out << '\n';
    };
    for (const auto& row : report.rows)
        line(row);
    line(report.overall);
    return out.str();
}

} // namespace privbot::training
