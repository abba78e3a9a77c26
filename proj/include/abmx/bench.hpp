#pragma once

#include <string>
#include <vector>

#include "abmx/batch.hpp"

namespace abmx {

// Timing rows produced by the warmup-subtraction protocol: every rung is
// timed `runs` times at (steps + warmup_steps) steps and `runs` times at
// warmup_steps steps; the reported value for run i is
// main_i - median(warmup runs), whose median equals
// median(main) - median(warmup).
struct BenchRow {
    std::string model;
    Index replicas = 0;
    std::int64_t steps = 0;
    double wall_ms_median = 0.0;
    double wall_ms_iqr = 0.0;
    std::int64_t warmup_steps_excluded = 0;
    std::vector<double> main_runs_ms;
    std::vector<double> warmup_runs_ms;
};

struct BenchReport {
    std::string model;
    std::int64_t steps = 0;
    std::int64_t runs = 0;
    std::int64_t warmup_steps = 0;
    std::vector<BenchRow> rows;
};

double median(std::vector<double> v);
double interquartile_range(std::vector<double> v);

BenchReport run_bench(const ModelDescriptor& model, const std::vector<Index>& ladder,
                      std::int64_t steps, std::int64_t runs, std::int64_t warmup_steps,
                      RngState master, int threads);

std::string bench_table(const BenchReport& report);

} // namespace abmx
