#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "abmx/kernels.hpp"
#include "abmx/rng.hpp"

namespace abmx {

// Per-field initializer used by create_agents. Uniform initializers draw per
// slot from the stream seed.split(StreamTag::CreateField).split(field
// ordinal), where the ordinal counts fields across the state, params,
// policy_state and policy_params lists in declaration order.
struct FieldInit {
    struct ConstInt { std::int64_t value; };
    struct ConstReal { double value; };
    struct ConstBool { bool value; };
    struct UniformInt { std::int64_t lo; std::int64_t hi; }; // [lo, hi)
    struct UniformReal { double lo; double hi; };            // [lo, hi)
    // integer draw stored in a real column (keeps values on a dyadic grid)
    struct UniformIntAsReal { std::int64_t lo; std::int64_t hi; };

    std::string name;
    std::variant<ConstInt, ConstReal, ConstBool, UniformInt, UniformReal, UniformIntAsReal> init;

    static FieldInit const_int(std::string n, std::int64_t v) { return {std::move(n), ConstInt{v}}; }
    static FieldInit const_real(std::string n, double v) { return {std::move(n), ConstReal{v}}; }
    static FieldInit const_bool(std::string n, bool v) { return {std::move(n), ConstBool{v}}; }
    static FieldInit uniform_int(std::string n, std::int64_t lo, std::int64_t hi) {
        return {std::move(n), UniformInt{lo, hi}};
    }
    static FieldInit uniform_real(std::string n, double lo, double hi) {
        return {std::move(n), UniformReal{lo, hi}};
    }
    static FieldInit uniform_int_as_real(std::string n, std::int64_t lo, std::int64_t hi) {
        return {std::move(n), UniformIntAsReal{lo, hi}};
    }
};

struct AgentSchema {
    std::vector<FieldInit> state;
    std::vector<FieldInit> params;
    std::vector<FieldInit> policy_state;
    std::vector<FieldInit> policy_params;
};

// Builds a fixed-capacity set with the first num_active slots live (ids
// 0..num_active-1, age 0). Placeholder slots hold schema defaults. Random
// initializers are replayable from the documented split schedule.
AgentSet create_agents(Index capacity, Index num_active, const AgentSchema& schema,
                       RngState seed, std::int64_t agent_type = 0);

// Per-agent transition: reads the input slot (and optional shared input),
// writes replacement state values. Unwritten fields keep their old value.
using TransitionFn =
    std::function<void(const SlotView&, const FieldBundle* shared, StateWriter&)>;

// Maps every slot through the transition, then forces placeholder slots back
// to schema defaults and increments the age of active agents (unless
// increment_age is false).
AgentSet step_agents(const AgentSet& set, const TransitionFn& fn,
                     const FieldBundle* shared_input = nullptr, bool increment_age = true);

// active &= ~kill_mask; killed slots are reset to placeholders. Ids are
// never reused (the id counter only moves forward).
AgentSet remove_agents(const AgentSet& set, std::span<const std::uint8_t> kill_mask);

struct SpawnOutcome {
    AgentSet set;
    Index spawned = 0;
    Index dropped = 0; // valid rows beyond free-slot supply
    std::vector<Index> slots; // slot of pair k
    std::vector<Index> rows;  // row of pair k
};

// Inserts the valid rows of `newborns` into placeholder slots using the
// rank-match pairing (target mask = NOT active): the k-th free slot receives
// the k-th valid row, truncated to min(free, valid). apply writes the state
// fields; id (fresh, ascending), age 0, type and active are handled here.
SpawnOutcome spawn_agents(const AgentSet& set, const UpdateBatch& newborns,
                          const ApplyFn& apply,
                          std::optional<std::int64_t> agent_type = std::nullopt);

} // namespace abmx
