#include "cli.hpp"

#include "privbot/crypto.hpp"
#include "privbot/error.hpp"
#include "privbot/market_data.hpp"
#include "privbot/orchestrator.hpp"
#include "privbot/strategy.hpp"
#include "privbot/training.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

namespace privbot::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

int exit_code_for(Errc code) {
    switch (code) {
    case Errc::InvalidArgument:
    case Errc::BadConfig:
    case Errc::UnknownPhase:
    case Errc::InvalidRange:
    case Errc::NotAMultiple: return kBadArgs;
    case Errc::VerifierAlreadyDeployed:
    case Errc::VerifierNotDeployed:
    case Errc::DuplicateUser:
    case Errc::ConstraintUnsatisfied:
    case Errc::InvalidWitness: return kInternal;
    default: return kBadData;
    }
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string sha256_hex(std::string_view data) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(data.data());
    return crypto::to_hex(crypto::sha256({p, data.size()}));
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::FileNotFound, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json parse_json_file(const fs::path& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw Error(Errc::BadConfig, path.string() + ": " + e.what());
    }
}

// Every option lives in one place so that the effective configuration can be
// resolved as flag > config file > default and echoed back verbatim.
class Settings {
public:
    template <class T>
    CLI::Option* add(CLI::App* owner, const std::string& flags, const std::string& key, T fallback,
                     const std::string& help) {
        auto holder = std::make_shared<T>(fallback);
        auto* opt = owner->add_option(flags, *holder, help);
        entries_.push_back({owner, key, opt, [holder] { return json(*holder); }, json(fallback)});
        return opt;
    }

    CLI::Option* flag(CLI::App* owner, const std::string& flags, const std::string& key, const std::string& help) {
        auto holder = std::make_shared<bool>(false);
        auto* opt = owner->add_flag(flags, *holder, help);
        entries_.push_back({owner, key, opt, [holder] { return json(*holder); }, json(false)});
        return opt;
    }

    json resolve(const CLI::App* root, const CLI::App* command, const json& file) const {
        json out = json::object();
        for (const auto& e : entries_) {
            if (e.owner != root && e.owner != command)
                continue;
            if (e.option->count() > 0)
                out[e.key] = e.value();
            else if (file.contains(e.key))
                out[e.key] = file[e.key];
            else
                out[e.key] = e.fallback;
        }
        return out;
    }

private:
    struct Entry {
        const CLI::App* owner;
        std::string key;
        CLI::Option* option;
        std::function<json()> value;
        json fallback;
    };
    std::vector<Entry> entries_;
};

template <class T>
T get(const json& cfg, const std::string& key) {
    try {
        return cfg.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(Errc::BadConfig, "setting '" + key + "': " + e.what());
    }
}

std::int64_t parse_period_token(std::string token) {
    token.erase(std::remove_if(token.begin(), token.end(), [](unsigned char c) { return std::isspace(c); }),
                token.end());
    std::size_t digits = 0;
    while (digits < token.size() && std::isdigit(static_cast<unsigned char>(token[digits])))
        ++digits;
    if (digits == 0 || digits > 12)
        throw Error(Errc::InvalidArgument, "unknown period '" + token + "'");
    const std::int64_t value = std::stoll(token.substr(0, digits));
    const auto unit = token.substr(digits);
    std::int64_t scale = 0;
    if (unit.empty() || unit == "s")
        scale = 1;
    else if (unit == "m")
        scale = 60;
    else if (unit == "h")
        scale = 3600;
    else if (unit == "d")
        scale = market::kSecondsPerDay;
    if (scale == 0 || value <= 0)
        throw Error(Errc::InvalidArgument, "unknown period '" + token + "'");
    return value * scale;
}

std::vector<std::int64_t> parse_periods(const std::string& list) {
    std::vector<std::int64_t> out;
    std::stringstream ss(list);
    std::string token;
    while (std::getline(ss, token, ','))
        out.push_back(parse_period_token(token));
    if (out.empty())
        throw Error(Errc::InvalidArgument, "no periods given");
    return out;
}

std::vector<training::RankMethod> methods_from(const std::string& text) {
    if (text == "both")
        return {training::RankMethod::AverageReturn, training::RankMethod::SharpeRatio};
    if (auto m = training::parse_method(text))
        return {*m};
    throw Error(Errc::InvalidArgument, "method must be sharpe, avg or both, got '" + text + "'");
}

class Run {
public:
    Run(std::string command, json config, fs::path out_dir)
        : command_(std::move(command)), config_(std::move(config)), out_dir_(std::move(out_dir)) {
        fs::create_directories(out_dir_);
    }

    void input(const fs::path& path) {
        inputs_.push_back({{"path", path.string()}, {"sha256", sha256_hex(read_file(path))}});
    }

    void write(const std::string& name, const std::string& content) {
        std::ofstream f(out_dir_ / name, std::ios::binary);
        if (!f)
            throw Error(Errc::InvalidArgument, "cannot write " + (out_dir_ / name).string());
        f << content;
        outputs_.push_back({{"path", name}, {"sha256", sha256_hex(content)}});
    }

    void finish() {
        ordered_json manifest;
        manifest["command"] = command_;
        manifest["config"] = config_;
        manifest["seed"] = config_.at("seed");
        manifest["inputs"] = inputs_;
        manifest["outputs"] = outputs_;
        std::ofstream f(out_dir_ / "manifest.json", std::ios::binary);
        f << manifest.dump(2) << '\n';
    }

    const fs::path& dir() const { return out_dir_; }

private:
    std::string command_;
    json config_;
    fs::path out_dir_;
    ordered_json inputs_ = ordered_json::array();
    ordered_json outputs_ = ordered_json::array();
};

market::PriceSeries load_input(const json& cfg, Run& run) {
    const auto path = get<std::string>(cfg, "input");
    if (path.empty())
        throw Error(Errc::InvalidArgument, "--input is required");
    auto series = market::load_candles(path, get<std::string>(cfg, "pair"), get<std::int64_t>(cfg, "period"));
    run.input(path);
    return series;
}

training::TrainOptions train_options(const json& cfg) {
    training::TrainOptions o;
    const auto top = get<std::int64_t>(cfg, "top");
    if (top < 1)
        throw Error(Errc::InvalidArgument, "--top must be at least 1");
    o.top_k = static_cast<std::size_t>(top);
    o.backtest.fees_bps = get<std::int64_t>(cfg, "fees_bps");
    if (o.backtest.fees_bps < 0 || o.backtest.fees_bps >= 10'000)
        throw Error(Errc::InvalidArgument, "--fees-bps must be in [0, 10000)");
    o.threads = get<unsigned>(cfg, "threads");
    return o;
}

std::int64_t stride_of(const json& cfg) { return get<std::int64_t>(cfg, "stride"); }

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

void cmd_ingest(const json& cfg, Run& run, std::ostream& out) {
    auto series = load_input(cfg, run);
    if (const auto target = get<std::int64_t>(cfg, "resample"); target > 0)
        series = market::resample(series, target);
    const auto closes = series.closes();
    ordered_json summary;
    summary["pair"] = series.pair();
    summary["period_seconds"] = series.period_seconds();
    summary["candles"] = series.size();
    summary["first_timestamp"] = series.first_timestamp();
    summary["last_timestamp"] = series.last_timestamp();
    summary["min_close_cents"] = *std::min_element(closes.begin(), closes.end());
    summary["max_close_cents"] = *std::max_element(closes.begin(), closes.end());
    run.write("candles.csv", market::to_csv(series));
    run.write("ingest.json", summary.dump(2) + "\n");
    out << series.size() << " candles at " << series.period_seconds() << " s\n";
}

void cmd_periods(const json& cfg, Run& run, std::ostream& out) {
    const auto series = load_input(cfg, run);
    const auto windows = market::select_periods(series, stride_of(cfg));
    const auto split = market::split_periods(windows);
    std::ostringstream csv;
    csv << "start,end,role\n";
    ordered_json j = ordered_json::array();
    for (const auto* part : {&split.train, &split.test})
        for (const auto& w : *part) {
            csv << w.start << ',' << w.end << ',' << market::role_name(w.role) << '\n';
            j.push_back({{"start", w.start}, {"end", w.end}, {"role", std::string(market::role_name(w.role))}});
        }
    run.write("periods.csv", csv.str());
    run.write("periods.json", j.dump(2) + "\n");
    out << windows.size() << " windows: " << split.train.size() << " train, " << split.test.size() << " test\n";
}

void write_ranking(Run& run, const std::string& stem, const training::RankingReport& report) {
    run.write(stem + ".csv", training::to_csv(report));
    run.write(stem + ".json", pretty(training::to_json(report)));
}

void cmd_train(const json& cfg, Run& run, std::ostream& out) {
    const auto series = load_input(cfg, run);
    const auto split = market::split_periods(market::select_periods(series, stride_of(cfg)));
    auto options = train_options(cfg);
    for (const auto method : methods_from(get<std::string>(cfg, "method"))) {
        options.method = method;
        const auto report = training::train(series, split.train, options);
        const std::string stem = "train_" + std::string(training::method_name(method));
        write_ranking(run, stem, report);
        out << stem << ": " << report.rows.size() << " rows over " << split.train.size() << " windows\n";
    }
}

void cmd_evaluate(const json& cfg, Run& run, std::ostream& out) {
    const auto series = load_input(cfg, run);
    const auto split = market::split_periods(market::select_periods(series, stride_of(cfg)));
    auto options = train_options(cfg);
    std::vector<training::RankingReport> ranked;
    if (const auto ranking = get<std::string>(cfg, "ranking"); !ranking.empty()) {
        ranked.push_back(training::ranking_from_json(parse_json_file(ranking)));
        run.input(ranking);
    } else {
        for (const auto method : methods_from(get<std::string>(cfg, "method"))) {
            options.method = method;
            ranked.push_back(training::train(series, split.train, options));
        }
    }
    for (const auto& top : ranked) {
        const auto report = training::evaluate(top, series, split.test, options.backtest, options.threads);
        const std::string stem = "test_" + std::string(training::method_name(top.method));
        write_ranking(run, stem, report);
        out << stem << ": " << report.rows.size() << " rows over " << split.test.size() << " windows\n";
    }
}

void cmd_frequency(const json& cfg, Run& run, std::ostream& out) {
    const auto series = load_input(cfg, run);
    const auto periods = parse_periods(get<std::string>(cfg, "periods"));
    auto options = train_options(cfg);
    for (const auto method : methods_from(get<std::string>(cfg, "method"))) {
        options.method = method;
        const std::string name(training::method_name(method));
        const auto studies = training::frequency_study(series, periods, options, stride_of(cfg));
        std::ostringstream combined;
        combined << "period,split,config,max,min,mean,stddev\n";
        ordered_json j = ordered_json::array();
        for (const auto& s : studies) {
            const std::pair<const char*, const training::RankingReport*> parts[] = {{"train", &s.training},
                                                                                     {"test", &s.testing}};
            for (const auto& [split, report] : parts) {
                const auto table = training::to_csv(*report);
                run.write("frequency_" + std::to_string(s.period_seconds) + "_" + name + "_" + split + ".csv", table);
                std::istringstream lines(table);
                std::string line;
                std::getline(lines, line); // header
                while (std::getline(lines, line))
                    combined << s.period_seconds << ',' << split << ',' << line << '\n';
            }
            j.push_back({{"period_seconds", s.period_seconds},
                         {"train_windows", s.train_windows},
                         {"test_windows", s.test_windows},
                         {"training", training::to_json(s.training)},
                         {"testing", training::to_json(s.testing)}});
            out << name << " " << s.period_seconds << " s: " << s.train_windows << " train / " << s.test_windows
                << " test windows\n";
        }
        run.write("frequency_" + name + ".csv", combined.str());
        run.write("frequency_" + name + ".json", j.dump(2) + "\n");
    }
}

strategy::ParamConfig simulate_strategy(const json& cfg, Run& run) {
    if (const auto ranking = get<std::string>(cfg, "ranking"); !ranking.empty()) {
        const auto report = training::ranking_from_json(parse_json_file(ranking));
        run.input(ranking);
        if (report.rows.empty() || !report.rows.front().config)
            throw Error(Errc::BadConfig, "ranking has no configurations");
        return *report.rows.front().config;
    }
    const auto label = get<std::string>(cfg, "strategy");
    const auto parsed = strategy::ParamConfig::parse(label);
    if (!parsed || !parsed->valid())
        throw Error(Errc::InvalidArgument, "bad strategy label '" + label + "'");
    return *parsed;
}

void cmd_simulate(const json& cfg, Run& run, std::ostream& out) {
    const auto rounds = get<std::int64_t>(cfg, "rounds");
    if (rounds < 1)
        throw Error(Errc::InvalidArgument, "--rounds must be at least 1");
    const auto users = get<std::int64_t>(cfg, "users");
    if (users < 1)
        throw Error(Errc::InvalidArgument, "--users must be at least 1");
    const auto deposit_usd = get<std::int64_t>(cfg, "deposit");
    if (deposit_usd < 1 || deposit_usd > 1'000'000'000)
        throw Error(Errc::InvalidArgument, "--deposit must be a positive dollar amount");

    const auto series = load_input(cfg, run);
    orchestrator::EpochConfig epoch;
    epoch.config = simulate_strategy(cfg, run);
    const auto trade_period = get<std::int64_t>(cfg, "trade_period");
    epoch.period_seconds = trade_period > 0 ? trade_period : series.period_seconds();
    epoch.rounds = static_cast<std::size_t>(rounds);
    epoch.users = static_cast<std::size_t>(users);
    epoch.deposit = deposit_usd * 100;
    if (const auto start = get<std::int64_t>(cfg, "start"); start >= 0)
        epoch.start_timestamp = start;

    auto& sim = epoch.simulation;
    if (const auto path = get<std::string>(cfg, "chain_config"); !path.empty()) {
        sim.chain = chain::chain_config_from_json(parse_json_file(path));
        run.input(path);
    }
    if (get<bool>(cfg, "no_jitter"))
        sim.chain.jitter = false;
    const auto family = get<std::string>(cfg, "latency");
    if (family == "constant")
        sim.chain.latency.family = chain::LatencyFamily::Constant;
    else if (family != "lognormal")
        throw Error(Errc::InvalidArgument, "--latency must be lognormal or constant");
    sim.slippage_bps = get<std::int64_t>(cfg, "slippage_bps");
    if (sim.slippage_bps < 0 || sim.slippage_bps >= 10'000)
        throw Error(Errc::InvalidArgument, "--slippage-bps must be in [0, 10000)");

    const auto seed = get<std::uint64_t>(cfg, "seed");
    sim.seed = splitmix(seed);
    sim.chain.jitter_seed = splitmix(seed + 1);
    sim.chain.latency_seed = splitmix(seed + 2);
    sim.setup_seed = "privbot-setup-" + std::to_string(seed);

    const auto report = orchestrator::run_epoch(series, epoch);
    run.write("report.json", pretty(report.to_json()));
    run.write("traces.jsonl", report.traces_jsonl());
    run.write("ledger.csv", report.ledger.to_csv());
    run.write("latency.csv", report.latency_csv());
    out << report.rounds << " rounds: " << report.trades << " trades, " << report.holds << " holds, "
        << report.aborts << " aborts; gas " << report.total_gas << "\n";
}

std::string markdown_table(const json& ranking) {
    std::ostringstream md;
    md << "| config | max | min | mean | stddev |\n|---|---|---|---|---|\n";
    const auto row = [&](const json& r) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "| %s | %.2f | %.2f | %.2f | %.2f |\n", r.at("config").get<std::string>().c_str(),
                      r.at("max").get<double>(), r.at("min").get<double>(), r.at("mean").get<double>(),
                      r.at("stddev").get<double>());
        md << buf;
    };
    for (const auto& r : ranking.at("rows"))
        row(r);
    row(ranking.at("overall"));
    return md.str();
}

std::string epoch_summary(const json& report) {
    std::ostringstream md;
    md << "| phase | count | mean s | min s | max s |\n|---|---|---|---|---|\n";
    for (const auto& [phase, s] : report.at("latency").items()) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "| %s | %zu | %.2f | %.2f | %.2f |\n", phase.c_str(),
                      s.at("count").get<std::size_t>(), s.at("mean").get<double>(), s.at("min").get<double>(),
                      s.at("max").get<double>());
        md << buf;
    }
    const auto& gas = report.at("gas");
    char buf[200];
    std::snprintf(buf, sizeof buf, "\nTotal gas %lld (%.4f ETH, $%.2f) over %lld trades.\n",
                  static_cast<long long>(gas.at("total").get<std::int64_t>()), gas.at("total_eth").get<double>(),
                  static_cast<double>(gas.at("total_usd_cents").get<std::int64_t>()) / 100.0,
                  static_cast<long long>(report.at("trades").get<std::int64_t>()));
    md << buf;
    return md.str();
}

void cmd_report(const json& cfg, Run& run, std::ostream& out) {
    const fs::path from = get<std::string>(cfg, "from");
    if (from.empty())
        throw Error(Errc::InvalidArgument, "--from is required");
    const auto manifest_path = from / "manifest.json";
    const auto manifest = parse_json_file(manifest_path);
    run.input(manifest_path);
    std::ostringstream md;
    md << "# " << get<std::string>(manifest, "command") << " run\n";
    try {
        for (const auto& o : manifest.at("outputs")) {
            const auto name = o.at("path").get<std::string>();
            if (fs::path(name).extension() != ".json")
                continue;
            const auto path = from / name;
            const auto j = parse_json_file(path);
            run.input(path);
            if (j.is_object() && j.contains("rows") && j.contains("overall"))
                md << "\n## " << name << "\n\n" << markdown_table(j);
            else if (j.is_object() && j.contains("latency"))
                md << "\n## " << name << "\n\n" << epoch_summary(j);
            else if (j.is_array() && !j.empty() && j.front().contains("training"))
                for (const auto& s : j) {
                    const auto p = s.at("period_seconds").get<std::int64_t>();
                    md << "\n## " << name << " " << p << " s train\n\n" << markdown_table(s.at("training"));
                    md << "\n## " << name << " " << p << " s test\n\n" << markdown_table(s.at("testing"));
                }
        }
    } catch (const json::exception& e) {
        throw Error(Errc::BadConfig, std::string("unreadable run output: ") + e.what());
    }
    run.write("report.md", md.str());
    out << md.str();
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Private Bollinger-band trading bot simulator", "privbot"};
    app.require_subcommand(1);
    app.fallthrough();
    Settings settings;
    settings.add<std::uint64_t>(&app, "--seed", "seed", 7, "Seed for every random draw");
    settings.add<unsigned>(&app, "--threads", "threads", 0, "Worker threads, 0 = all cores");
    std::string config_path;
    std::string out_dir = "out";
    bool show_config = false;
    app.add_option("--config", config_path, "JSON settings file or an earlier manifest.json");
    app.add_option("--out", out_dir, "Output directory");
    app.add_flag("--show-config", show_config, "Print the effective settings and exit");

    const auto data_opts = [&](CLI::App* sub, std::int64_t period) {
        settings.add<std::string>(sub, "--input", "input", "", "Candle CSV");
        settings.add<std::string>(sub, "--pair", "pair", "ETH:USDC", "BASE:QUOTE label");
        settings.add<std::int64_t>(sub, "--period", "period", period, "Candle period of the input, seconds");
    };
    const auto train_opts = [&](CLI::App* sub) {
        settings.add<std::int64_t>(sub, "--stride", "stride", market::kDefaultStrideSeconds, "Window stride, seconds");
        settings.add<std::string>(sub, "--method", "method", "both", "sharpe, avg or both");
        settings.add<std::int64_t>(sub, "--top", "top", 5, "Configurations kept per report");
        settings.add<std::int64_t>(sub, "--fees-bps", "fees_bps", 0, "Fee per trade, basis points");
    };

    auto* ingest = app.add_subcommand("ingest", "Validate and normalize a candle file");
    data_opts(ingest, 600);
    settings.add<std::int64_t>(ingest, "--resample", "resample", 0, "Target period, seconds (0 keeps the input)");

    auto* periods = app.add_subcommand("periods", "List the losing 30-day windows and their split");
    data_opts(periods, 600);
    settings.add<std::int64_t>(periods, "--stride", "stride", market::kDefaultStrideSeconds, "Window stride, seconds");

    auto* train = app.add_subcommand("train", "Grid-search the training windows");
    data_opts(train, 600);
    train_opts(train);

    auto* evaluate = app.add_subcommand("evaluate", "Backtest ranked configurations on the test windows");
    data_opts(evaluate, 600);
    train_opts(evaluate);
    settings.add<std::string>(evaluate, "--ranking", "ranking", "", "Training report JSON (trains when empty)");

    auto* frequency = app.add_subcommand("frequency", "Train and test at several trading periods");
    data_opts(frequency, 60);
    train_opts(frequency);
    settings.add<std::string>(frequency, "--periods", "periods", "60,600,3600", "Comma list, e.g. 60,600,3600 or 1m,1h");

    auto* simulate = app.add_subcommand("simulate", "Run a trading epoch through chain, proofs and DEX");
    data_opts(simulate, 600);
    settings.add<std::string>(simulate, "--strategy", "strategy", "20.2.0.0", "Configuration label n.d.u.l");
    settings.add<std::string>(simulate, "--ranking", "ranking", "", "Use the top row of this training report");
    settings.add<std::int64_t>(simulate, "--trade-period", "trade_period", 0, "Trading period, seconds (0 = input)");
    settings.add<std::int64_t>(simulate, "--rounds", "rounds", 1000, "Trading rounds");
    settings.add<std::int64_t>(simulate, "--users", "users", 1000, "Subscribers");
    settings.add<std::int64_t>(simulate, "--deposit", "deposit", 1000, "Deposit per subscriber, USD");
    settings.add<std::int64_t>(simulate, "--start", "start", -1, "First round timestamp (-1 = first with history)");
    settings.add<std::string>(simulate, "--chain-config", "chain_config", "", "Chain config JSON");
    settings.add<std::string>(simulate, "--latency", "latency", "lognormal", "lognormal or constant");
    settings.add<std::int64_t>(simulate, "--slippage-bps", "slippage_bps", 0, "DEX slippage, basis points");
    settings.flag(simulate, "--no-jitter", "no_jitter", "Charge the mean verifier gas every time");

    auto* report = app.add_subcommand("report", "Render a finished run as markdown");
    settings.add<std::string>(report, "--from", "from", "", "Output directory of an earlier run");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kBadArgs;
    }

    const CLI::App* command = app.get_subcommands().front();
    try {
        json file = json::object();
        if (!config_path.empty()) {
            file = parse_json_file(config_path);
            if (file.is_object() && file.contains("command") && file.contains("config"))
                file = file["config"];
            if (!file.is_object())
                throw Error(Errc::BadConfig, "config file must hold a JSON object");
        }
        const auto cfg = settings.resolve(&app, command, file);
        if (show_config) {
            out << cfg.dump(2) << "\n";
            return kOk;
        }

        Run run(command->get_name(), cfg, out_dir);
        const auto& name = command->get_name();
        if (name == "ingest")
            cmd_ingest(cfg, run, out);
        else if (name == "periods")
            cmd_periods(cfg, run, out);
        else if (name == "train")
            cmd_train(cfg, run, out);
        else if (name == "evaluate")
            cmd_evaluate(cfg, run, out);
        else if (name == "frequency")
            cmd_frequency(cfg, run, out);
        else if (name == "simulate")
            cmd_simulate(cfg, run, out);
        else if (name == "report")
            cmd_report(cfg, run, out);
        run.finish();
        return kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

} // namespace privbot::cli
