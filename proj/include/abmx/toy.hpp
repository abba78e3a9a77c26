#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace abmx {

// The even/odd pairing task: set the first r = min(p, q) even entries of `a`
// to the first r odd entries of `b`, where p and q count the even entries of
// `a` and odd entries of `b`. Runs through the real agent-set kernels.
struct ToyResult {
    std::vector<std::int64_t> rank_match;
    std::vector<std::int64_t> sort_count_iterate;
};

ToyResult run_toy(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b);

std::string format_int_list(const std::vector<std::int64_t>& v);

} // namespace abmx
