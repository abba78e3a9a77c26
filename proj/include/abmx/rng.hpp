#pragma once

#include <cstdint>

namespace abmx {

// Counter-based splittable generator.
//
// A stream is a single 64-bit key. Draws are pure functions of (key, counter)
// and child streams are pure functions of (key, split index), so any consumer
// can be replayed independently of evaluation order or thread count:
//
//   draw(c)  = mix64(key + 0x9E3779B97F4A7C15 * (c + 1))
//   split(i) = RngState{ mix64(key + 0xC2B2AE3D27D4EB4F * (i + 1)) }
//
// where mix64 is the splitmix64 finalizer. Distinct odd multipliers keep the
// draw and split domains disjoint.
//
// Mapping of raw draws to values (all consumers use these exact forms):
//   uniform_double(c)        = (draw(c) >> 11) * 2^-53                  in [0, 1)
//   uniform_int(c, lo, hi)   = lo + high64(draw(c) * (hi - lo))         in [lo, hi)
//   bernoulli(c, p)          = uniform_double(c) < p
//
// Stream tags: every operation that consumes randomness derives its streams
// as seed.split(tag).split(a).split(b)... with the tag below and the
// schedule documented at the operation. Tests replay these schedules with an
// independent reimplementation.
enum class StreamTag : std::uint64_t {
    CreateField = 1,     // create_agents: split(tag), split(field ordinal); draw(slot)
    BatchReplica = 2,    // batch runner: split(tag), split(replica index)
    PredMove = 3,        // predation move: split(tag), split(step); draw(slot)
    PredReproduce = 4,   // predation reproduce: split(tag), split(step); draw(slot)
    TrafficSignal = 5,   // signal phase: split(tag); draw(0) mod period
    TrafficPropose = 6,  // move proposals: split(tag), split(step); draw(slot)
    TrafficSpawn = 7,    // spawning: split(tag), split(step); draw(0..2)
    FinancePlace = 8,    // order placement: split(tag), split(step), split(book);
                         // trader i consumes draws 4i..4i+3
};

struct RngState {
    std::uint64_t key = 0;

    RngState split(std::uint64_t index) const;
    RngState split(StreamTag tag) const { return split(static_cast<std::uint64_t>(tag)); }

    std::uint64_t draw(std::uint64_t counter) const;
    double uniform_double(std::uint64_t counter) const;
    // Uniform over [lo, hi); requires lo < hi.
    std::int64_t uniform_int(std::uint64_t counter, std::int64_t lo, std::int64_t hi) const;
    bool bernoulli(std::uint64_t counter, double p) const;
};

std::uint64_t mix64(std::uint64_t z);

} // namespace abmx
