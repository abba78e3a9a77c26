#include "abmx/bench.hpp"

#include <algorithm>
#include <cstdio>

#include "abmx/errors.hpp"

namespace abmx {

namespace {

// type-7 quantile (linear interpolation), enough for timing summaries
double quantile_sorted(const std::vector<double>& v, double q) {
    if (v.empty())
        return 0.0;
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

} // namespace

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, 0.5);
}

double interquartile_range(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, 0.75) - quantile_sorted(v, 0.25);
}

BenchReport run_bench(const ModelDescriptor& model, const std::vector<Index>& ladder,
                      std::int64_t steps, std::int64_t runs, std::int64_t warmup_steps,
                      RngState master, int threads) {
    if (runs < 5)
        throw DomainError("bench needs at least 5 runs per rung");
    if (warmup_steps < 1 || steps < 1)
        throw DomainError("bench steps and warmup must be >= 1");

    BenchReport report;
    report.model = model.name;
    report.steps = steps;
    report.runs = runs;
    report.warmup_steps = warmup_steps;

    for (const Index replicas : ladder) {
        BenchRow row;
        row.model = model.name;
        row.replicas = replicas;
        row.steps = steps;
        row.warmup_steps_excluded = warmup_steps;

        const auto seeds = replica_seeds(master, replicas);
        for (std::int64_t r = 0; r < runs; ++r) {
            double ms = 0.0;
            run_batch(model, seeds, steps + warmup_steps, threads, &ms);
            row.main_runs_ms.push_back(ms);
        }
        for (std::int64_t r = 0; r < runs; ++r) {
            double ms = 0.0;
            run_batch(model, seeds, warmup_steps, threads, &ms);
            row.warmup_runs_ms.push_back(ms);
        }

        const double warm_med = median(row.warmup_runs_ms);
        std::vector<double> adjusted;
        adjusted.reserve(row.main_runs_ms.size());
        for (const double ms : row.main_runs_ms)
            adjusted.push_back(ms - warm_med);
        row.wall_ms_median = median(adjusted);
        row.wall_ms_iqr = interquartile_range(adjusted);
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string bench_table(const BenchReport& report) {
    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "model=%s steps=%lld runs=%lld warmup=%lld\n",
                  report.model.c_str(), static_cast<long long>(report.steps),
                  static_cast<long long>(report.runs),
                  static_cast<long long>(report.warmup_steps));
    out += buf;
    std::snprintf(buf, sizeof(buf), "%10s %16s %16s\n", "replicas", "median_ms", "iqr_ms");
    out += buf;
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof(buf), "%10d %16.3f %16.3f\n", row.replicas,
                      row.wall_ms_median, row.wall_ms_iqr);
        out += buf;
    }
    return out;
}

} // namespace abmx
