#include "privbot/market_data.hpp"

#include "privbot/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace privbot::market {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(',', pos);
        out.push_back(trim(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos)
            break;
        pos = next + 1;
    }
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
    std::int64_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        return std::nullopt;
    return v;
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        return std::nullopt;
    return v;
}

} // namespace

PriceSeries::PriceSeries(std::string pair, std::int64_t period_seconds, std::vector<Candle> candles)
    : pair_(std::move(pair)), period_(period_seconds), candles_(std::move(candles)) {
    if (period_ <= 0)
        throw Error(Errc::InvalidArgument, "period_seconds must be positive");
    if (candles_.empty())
        throw Error(Errc::EmptyList, "a price series needs at least one candle");
    for (std::size_t i = 0; i < candles_.size(); ++i) {
        const auto& c = candles_[i];
        if (c.timestamp < 0)
            throw Error(Errc::InvalidArgument, "negative timestamp", c.timestamp);
        if (c.close <= 0)
            throw Error(Errc::InvalidArgument, "close must be positive", c.timestamp);
        if (i > 0) {
            const auto prev = candles_[i - 1].timestamp;
            if (c.timestamp == prev)
                throw Error(Errc::DuplicateTimestamp, "duplicate timestamp " + std::to_string(c.timestamp),
                            c.timestamp);
            if (c.timestamp - prev != period_)
                throw Error(Errc::NonUniformSpacing, "gap before timestamp " + std::to_string(c.timestamp),
                            c.timestamp);
        }
    }
}

std::optional<std::size_t> PriceSeries::index_of(std::int64_t timestamp) const noexcept {
    const auto offset = timestamp - first_timestamp();
    if (offset < 0 || offset % period_ != 0)
        return std::nullopt;
    const auto idx = static_cast<std::size_t>(offset / period_);
    if (idx >= candles_.size())
        return std::nullopt;
    return idx;
}

std::optional<std::size_t> PriceSeries::index_at_or_before(std::int64_t timestamp) const noexcept {
    const auto offset = timestamp - first_timestamp();
    if (offset < 0)
        return std::nullopt;
    return std::min(static_cast<std::size_t>(offset / period_), candles_.size() - 1);
}

std::vector<Cents> PriceSeries::closes() const {
    std::vector<Cents> out;
    out.reserve(candles_.size());
    for (const auto& c : candles_)
        out.push_back(c.close);
    return out;
}

std::string_view role_name(PeriodRole role) noexcept { return role == PeriodRole::Train ? "train" : "test"; }

std::optional<Cents> parse_price_cents(std::string_view text) {
    text = trim(text);
    if (text.empty())
        return std::nullopt;
    const auto dot = text.find('.');
    const auto int_part = text.substr(0, dot);
    const auto frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty())
        return std::nullopt;
    const auto all_digits = [](std::string_view s) {
        return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    if (!all_digits(int_part) || !all_digits(frac_part))
        return std::nullopt;
    if (int_part.size() > 15)
        return std::nullopt;

    Cents cents = 0;
    for (char c : int_part)
        cents = cents * 10 + (c - '0');
    for (std::size_t i = 0; i < 2; ++i)
        cents = cents * 10 + (i < frac_part.size() ? frac_part[i] - '0' : 0);

    if (frac_part.size() > 2) {
        const auto rest = frac_part.substr(2);
        const int first = rest.front() - '0';
        const bool tail_nonzero = std::any_of(rest.begin() + 1, rest.end(), [](char c) { return c != '0'; });
        if (first > 5 || (first == 5 && tail_nonzero) || (first == 5 && !tail_nonzero && cents % 2 == 1))
            ++cents;
    }
    return cents;
}

PriceSeries parse_candles(std::istream& in, std::string pair, std::int64_t period_seconds) {
    std::string line;
    std::int64_t line_no = 0;
    bool have_header = false;
    std::map<std::string, std::size_t> columns;
    std::size_t column_count = 0;
    std::vector<Candle> candles;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto fields = split_commas(line);
        if (!have_header) {
            for (std::size_t i = 0; i < fields.size(); ++i)
                columns[lower(fields[i])] = i;
            column_count = fields.size();
            if (!columns.contains("timestamp") || !columns.contains("close"))
                throw Error(Errc::MalformedRow, "header must name timestamp and close columns", line_no);
            have_header = true;
            continue;
        }
        if (fields.size() != column_count)
            throw Error(Errc::MalformedRow, "expected " + std::to_string(column_count) + " fields on line " +
                                                std::to_string(line_no),
                        line_no);

        Candle c;
        const auto ts = parse_int(fields[columns["timestamp"]]);
        const auto close = parse_price_cents(fields[columns["close"]]);
        if (!ts || *ts < 0 || !close || *close <= 0)
            throw Error(Errc::MalformedRow, "bad timestamp or close on line " + std::to_string(line_no), line_no);
        c.timestamp = *ts;
        c.close = *close;

        const auto optional_price = [&](const char* name) -> std::optional<Cents> {
            const auto it = columns.find(name);
            if (it == columns.end() || fields[it->second].empty())
                return std::nullopt;
            const auto v = parse_price_cents(fields[it->second]);
            if (!v)
                throw Error(Errc::MalformedRow, std::string("bad ") + name + " on line " + std::to_string(line_no),
                            line_no);
            return v;
        };
        c.open = optional_price("open");
        c.high = optional_price("high");
        c.low = optional_price("low");
        if (const auto it = columns.find("volume"); it != columns.end() && !fields[it->second].empty()) {
            const auto v = parse_double(fields[it->second]);
            if (!v || *v < 0)
                throw Error(Errc::MalformedRow, "bad volume on line " + std::to_string(line_no), line_no);
            c.volume = v;
        }
        candles.push_back(c);
    }
    if (candles.empty())
        throw Error(Errc::EmptyFile, "no data rows");

    std::stable_sort(candles.begin(), candles.end(),
                     [](const Candle& a, const Candle& b) { return a.timestamp < b.timestamp; });
    return PriceSeries(std::move(pair), period_seconds, std::move(candles));
}

PriceSeries load_candles(const std::filesystem::path& path, std::string pair, std::int64_t period_seconds) {
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::FileNotFound, "cannot open " + path.string());
    return parse_candles(in, std::move(pair), period_seconds);
}

std::string format_cents(Cents cents) {
    const bool negative = cents < 0;
    const auto mag = negative ? -static_cast<__int128>(cents) : static_cast<__int128>(cents);
    const auto whole = static_cast<std::int64_t>(mag / 100);
    const auto frac = static_cast<int>(mag % 100);
    std::string out = negative ? "-" : "";
    out += std::to_string(whole);
    out += '.';
    out += static_cast<char>('0' + frac / 10);
    out += static_cast<char>('0' + frac % 10);
    return out;
}

std::string to_csv(const PriceSeries& series) {
    std::ostringstream out;
    out << "timestamp,open,high,low,close,volume\n";
    for (const auto& c : series.candles()) {
        out << c.timestamp << ',' << (c.open ? format_cents(*c.open) : "") << ','
            << (c.high ? format_cents(*c.high) : "") << ',' << (c.low ? format_cents(*c.low) : "") << ','
            << format_cents(c.close) << ',';
        if (c.volume) {
            char buf[64];
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *c.volume);
            if (ec == std::errc{})
                out.write(buf, ptr - buf);
        }
        out << '\n';
    }
    return out.str();
}

PriceSeries resample(const PriceSeries& series, std::int64_t new_period_seconds) {
    const auto old_period = series.period_seconds();
    if (new_period_seconds <= 0 || new_period_seconds % old_period != 0)
        throw Error(Errc::NotAMultiple, std::to_string(new_period_seconds) + " is not a positive multiple of " +
                                            std::to_string(old_period));
    const auto k = static_cast<std::size_t>(new_period_seconds / old_period);
    const auto buckets = series.size() / k;
    if (buckets == 0)
        throw Error(Errc::SeriesTooShort, "series shorter than one resampled period");

    std::vector<Candle> out;
    out.reserve(buckets);
    const auto all = series.candles();
    for (std::size_t b = 0; b < buckets; ++b) {
        const auto bucket = all.subspan(b * k, k);
        Candle c;
        c.timestamp = bucket.front().timestamp;
        c.close = bucket.back().close;
        const bool has_ohl = std::all_of(bucket.begin(), bucket.end(),
                                         [](const Candle& x) { return x.open && x.high && x.low; });
        if (has_ohl) {
            c.open = bucket.front().open;
            c.high = bucket.front().high;
            c.low = bucket.front().low;
            for (const auto& x : bucket) {
                c.high = std::max(*c.high, *x.high);
                c.low = std::min(*c.low, *x.low);
            }
        }
        if (std::all_of(bucket.begin(), bucket.end(), [](const Candle& x) { return x.volume.has_value(); })) {
            double v = 0;
            for (const auto& x : bucket)
                v += *x.volume;
            c.volume = v;
        }
        out.push_back(c);
    }
    return PriceSeries(series.pair(), new_period_seconds, std::move(out));
}

IndexRange window_indices(const PriceSeries& series, const PeriodWindow& window) {
    const auto first = series.index_of(window.start);
    if (!first || window.end <= window.start || window.end > series.last_timestamp())
        throw Error(Errc::WindowOutOfRange, "window [" + std::to_string(window.start) + ", " +
                                                std::to_string(window.end) + "] is not inside the series");
    const auto last = series.index_at_or_before(window.end);
    if (!last || *last <= *first)
        throw Error(Errc::WindowOutOfRange, "window covers fewer than two candles");
    return {*first, *last};
}

std::vector<PeriodWindow> select_periods(const PriceSeries& series, std::int64_t step_seconds) {
    if (step_seconds <= 0 || step_seconds % series.period_seconds() != 0)
        throw Error(Errc::InvalidArgument, "stride must be a positive multiple of the trading period");
    if (series.last_timestamp() - series.first_timestamp() < kWindowSeconds)
        throw Error(Errc::SeriesTooShort, "series spans less than 30 days");

    std::vector<PeriodWindow> out;
    for (auto start = series.first_timestamp(); start + kWindowSeconds <= series.last_timestamp();
         start += step_seconds) {
        const PeriodWindow w{start, start + kWindowSeconds, PeriodRole::Train};
        const auto range = window_indices(series, w);
        if (series[range.last].close < series[range.first].close)
            out.push_back(w);
    }
    return out;
}

PeriodSplit split_periods(std::span<const PeriodWindow> windows) {
    if (windows.empty())
        throw Error(Errc::EmptyList, "no windows to split");
    const auto n_train = (windows.size() + 1) / 2;
    PeriodSplit split;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        auto w = windows[i];
        w.role = i < n_train ? PeriodRole::Train : PeriodRole::Test;
        (i < n_train ? split.train : split.test).push_back(w);
    }
    return split;
}

PriceSeries generate_random_walk(const RandomWalkSpec& spec) {
    if (spec.count == 0)
        throw Error(Errc::InvalidArgument, "random walk needs at least one candle");
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> step(spec.drift_per_step, spec.vol_per_step);
    std::vector<Candle> candles;
    candles.reserve(spec.count);
    double log_price = std::log(static_cast<double>(spec.start_price));
    for (std::size_t i = 0; i < spec.count; ++i) {
        if (i > 0)
            log_price += step(rng);
        const auto cents = std::max<Cents>(1, std::llround(std::exp(log_price)));
        Candle c;
        c.timestamp = spec.start_timestamp + static_cast<std::int64_t>(i) * spec.period_seconds;
        c.close = cents;
        candles.push_back(c);
    }
    return PriceSeries(spec.pair, spec.period_seconds, std::move(candles));
}

} // namespace privbot::market
