// Regenerates the committed CSV fixtures under tests/fixtures.
#include "privbot/market_data.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace privbot::market;

namespace {

void write_closes(const fs::path& path, const PriceSeries& series) {
    std::ofstream f(path, std::ios::binary);
    f << "timestamp,close\n";
    for (const auto& c : series.candles())
        f << c.timestamp << ',' << format_cents(c.close) << '\n';
}

} // namespace

int main(int argc, char** argv) {
    const fs::path dir = argc > 1 ? argv[1] : "tests/fixtures";
    fs::create_directories(dir);

    // 90 days of 10-minute candles, drifting down about 0.25% per day.
    RandomWalkSpec walk;
    walk.seed = 20240601;
    walk.start_timestamp = 1'700'000'400;
    walk.period_seconds = 600;
    walk.count = 90 * 144;
    walk.start_price = 200'000;
    walk.drift_per_step = -0.000018;
    walk.vol_per_step = 0.004;
    write_closes(dir / "walk_10m.csv", generate_random_walk(walk));

    // One day of 1-minute candles.
    RandomWalkSpec minute = walk;
    minute.seed = 99;
    minute.period_seconds = 60;
    minute.count = 1440;
    minute.vol_per_step = 0.0012;
    write_closes(dir / "minute_1d.csv", generate_random_walk(minute));

    // Hand-checked backtest: six 6-day candles spanning exactly one window.
    std::ofstream six(dir / "six_candles.csv", std::ios::binary);
    six << "timestamp,close\n";
    const char* closes[] = {"100.00", "100.00", "100.00", "80.00", "80.00", "120.00"};
    for (int i = 0; i < 6; ++i)
        six << i * 518'400 << ',' << closes[i] << '\n';

    std::cout << "fixtures written to " << dir << "\n";
    return 0;
}
