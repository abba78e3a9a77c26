#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "abmx/column.hpp"

namespace abmx {

// Fixed-capacity structure-of-arrays agent collection. Slots beyond the live
// agents are placeholders: active == 0 and all state fields hold the schema
// default (0 / 0.0 / false), which keeps every column the same length for the
// whole run. Operations never resize anything.
class AgentSet {
public:
    AgentSet(Index capacity, FieldBundle state, FieldBundle params,
             FieldBundle policy_state = {}, FieldBundle policy_params = {});

    Index capacity() const noexcept { return capacity_; }
    Index num_active() const noexcept { return num_active_; }
    std::int64_t next_id() const noexcept { return next_id_; }

    std::span<const std::uint8_t> active() const { return {active_.data(), active_.size()}; }
    std::span<std::uint8_t> active_mut() { return {active_.data(), active_.size()}; }
    std::span<const std::int64_t> ids() const { return {ids_.data(), ids_.size()}; }
    std::span<std::int64_t> ids_mut() { return {ids_.data(), ids_.size()}; }
    std::span<const std::int64_t> types() const { return {types_.data(), types_.size()}; }
    std::span<std::int64_t> types_mut() { return {types_.data(), types_.size()}; }
    std::span<const std::int64_t> ages() const { return {ages_.data(), ages_.size()}; }
    std::span<std::int64_t> ages_mut() { return {ages_.data(), ages_.size()}; }

    const FieldBundle& state() const noexcept { return state_; }
    FieldBundle& state_mut() noexcept { return state_; }
    const FieldBundle& params() const noexcept { return params_; }
    FieldBundle& params_mut() noexcept { return params_; }
    const FieldBundle& policy_state() const noexcept { return policy_state_; }
    FieldBundle& policy_state_mut() noexcept { return policy_state_; }
    const FieldBundle& policy_params() const noexcept { return policy_params_; }
    FieldBundle& policy_params_mut() noexcept { return policy_params_; }

    void set_num_active(Index n);
    void set_next_id(std::int64_t id) { next_id_ = id; }

    // Off by default: ids are never reused. When enabled, ids retired by
    // remove_agents are handed back out by spawn_agents (most recent first)
    // before fresh ones are minted; live ids stay pairwise distinct either
    // way.
    void set_id_recycling(bool enabled) { recycle_ids_ = enabled; }
    bool id_recycling() const noexcept { return recycle_ids_; }
    std::vector<std::int64_t>& retired_ids() noexcept { return retired_ids_; }
    const std::vector<std::int64_t>& retired_ids() const noexcept { return retired_ids_; }

    // Zeroes the slot's state and lifecycle fields and clears active.
    void reset_slot(Index slot);

    // Recomputed popcount of the active mask (dispatch kernel).
    Index count_active() const;

    friend bool bitwise_equal(const AgentSet& a, const AgentSet& b);
    friend AgentSet permute_agents(const AgentSet& set, std::span<const Index> gather);

private:
    Index capacity_ = 0;
    Index num_active_ = 0;
    std::int64_t next_id_ = 0;
    bool recycle_ids_ = false;
    std::vector<std::int64_t> retired_ids_;
    Mask active_;
    std::vector<std::int64_t> ids_;
    std::vector<std::int64_t> types_;
    std::vector<std::int64_t> ages_;
    FieldBundle state_;
    FieldBundle params_;
    FieldBundle policy_state_;
    FieldBundle policy_params_;
};

// out[i] = in[gather[i]]; gather must be a permutation of 0..capacity-1.
AgentSet permute_agents(const AgentSet& set, std::span<const Index> gather);

// Read-only view of one slot. Name lookups go through the bundle, so hot
// loops should use the columns directly instead.
class SlotView {
public:
    SlotView(const AgentSet& set, Index slot) : set_(&set), slot_(slot) {}

    Index slot() const { return slot_; }
    bool is_active() const { return set_->active()[idx()] != 0; }
    std::int64_t id() const { return set_->ids()[idx()]; }
    std::int64_t agent_type() const { return set_->types()[idx()]; }
    std::int64_t age() const { return set_->ages()[idx()]; }

    std::int64_t state_int(std::string_view f) const { return set_->state().ints(f)[idx()]; }
    double state_real(std::string_view f) const { return set_->state().reals(f)[idx()]; }
    bool state_bool(std::string_view f) const { return set_->state().bools(f)[idx()] != 0; }

    std::int64_t param_int(std::string_view f) const { return set_->params().ints(f)[idx()]; }
    double param_real(std::string_view f) const { return set_->params().reals(f)[idx()]; }
    bool param_bool(std::string_view f) const { return set_->params().bools(f)[idx()] != 0; }

    const AgentSet& set() const { return *set_; }

private:
    std::size_t idx() const { return static_cast<std::size_t>(slot_); }
    const AgentSet* set_;
    Index slot_;
};

// Writes replacement values into the state columns of one slot. Lifecycle
// fields (id, type, age, active) are reserved for the lifecycle helpers.
class StateWriter {
public:
    StateWriter(AgentSet& set, Index slot) : set_(&set), slot_(slot) {}

    Index slot() const { return slot_; }
    void set_int(std::string_view f, std::int64_t v) { set_->state_mut().ints(f)[idx()] = v; }
    void set_real(std::string_view f, double v) { set_->state_mut().reals(f)[idx()] = v; }
    void set_bool(std::string_view f, bool v) { set_->state_mut().bools(f)[idx()] = v ? 1 : 0; }

private:
    std::size_t idx() const { return static_cast<std::size_t>(slot_); }
    AgentSet* set_;
    Index slot_;
};

} // namespace abmx
