#include "abmx/rng.hpp"

#include "abmx/errors.hpp"

namespace abmx {

namespace {
constexpr std::uint64_t kDrawMul = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kSplitMul = 0xC2B2AE3D27D4EB4FULL;
} // namespace

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RngState RngState::split(std::uint64_t index) const {
    return RngState{mix64(key + kSplitMul * (index + 1))};
}

std::uint64_t RngState::draw(std::uint64_t counter) const {
    return mix64(key + kDrawMul * (counter + 1));
}

double RngState::uniform_double(std::uint64_t counter) const {
    return static_cast<double>(draw(counter) >> 11) * 0x1.0p-53;
}

std::int64_t RngState::uniform_int(std::uint64_t counter, std::int64_t lo, std::int64_t hi) const {
    if (lo >= hi)
        throw DomainError("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo);
    const auto wide = static_cast<unsigned __int128>(draw(counter)) * span;
    return lo + static_cast<std::int64_t>(static_cast<std::uint64_t>(wide >> 64));
}

bool RngState::bernoulli(std::uint64_t counter, double p) const {
    return uniform_double(counter) < p;
}

} // namespace abmx
