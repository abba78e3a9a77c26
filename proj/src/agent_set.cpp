#include "abmx/agent_set.hpp"

#include "abmx/simd/kernels.hpp"

namespace abmx {

namespace {

void check_bundle(const FieldBundle& b, Index capacity, const char* role) {
    if (b.length() != static_cast<std::size_t>(capacity))
        throw SchemaError(std::string(role) + " bundle length does not equal capacity");
}

} // namespace

AgentSet::AgentSet(Index capacity, FieldBundle state, FieldBundle params,
                   FieldBundle policy_state, FieldBundle policy_params)
    : capacity_(capacity),
      active_(static_cast<std::size_t>(capacity), 0),
      ids_(static_cast<std::size_t>(capacity), 0),
      types_(static_cast<std::size_t>(capacity), 0),
      ages_(static_cast<std::size_t>(capacity), 0),
      state_(std::move(state)),
      params_(std::move(params)),
      policy_state_(std::move(policy_state)),
      policy_params_(std::move(policy_params)) {
    if (capacity < 0)
        throw CapacityError("negative capacity");
    if (policy_state_.field_count() == 0 && policy_state_.length() == 0)
        policy_state_ = FieldBundle(static_cast<std::size_t>(capacity));
    if (policy_params_.field_count() == 0 && policy_params_.length() == 0)
        policy_params_ = FieldBundle(static_cast<std::size_t>(capacity));
    check_bundle(state_, capacity, "state");
    check_bundle(params_, capacity, "params");
    check_bundle(policy_state_, capacity, "policy_state");
    check_bundle(policy_params_, capacity, "policy_params");
}

void AgentSet::set_num_active(Index n) {
    if (n < 0 || n > capacity_)
        throw CapacityError("num_active out of [0, capacity]");
    num_active_ = n;
}

void AgentSet::reset_slot(Index slot) {
    const auto i = static_cast<std::size_t>(slot);
    active_[i] = 0;
    ids_[i] = 0;
    ages_[i] = 0;
    for (std::size_t f = 0; f < state_.field_count(); ++f) {
        Column& c = state_.col(f);
        switch (c.kind()) {
        case Kind::Int: c.ints()[i] = 0; break;
        case Kind::Real: c.reals()[i] = 0.0; break;
        case Kind::Bool: c.bools()[i] = 0; break;
        }
    }
}

Index AgentSet::count_active() const {
    return static_cast<Index>(simd::active().count_true(active_.data(), active_.size()));
}

namespace {

void gather_column(const Column& in, Column& out, std::span<const Index> g) {
    switch (in.kind()) {
    case Kind::Int: {
        auto src = in.ints();
        auto dst = out.ints();
        for (std::size_t i = 0; i < g.size(); ++i)
            dst[i] = src[static_cast<std::size_t>(g[i])];
        break;
    }
    case Kind::Real: {
        auto src = in.reals();
        auto dst = out.reals();
        for (std::size_t i = 0; i < g.size(); ++i)
            dst[i] = src[static_cast<std::size_t>(g[i])];
        break;
    }
    case Kind::Bool: {
        auto src = in.bools();
        auto dst = out.bools();
        for (std::size_t i = 0; i < g.size(); ++i)
            dst[i] = src[static_cast<std::size_t>(g[i])];
        break;
    }
    }
}

void gather_bundle(const FieldBundle& in, FieldBundle& out, std::span<const Index> g) {
    for (std::size_t f = 0; f < in.field_count(); ++f)
        gather_column(in.col(f), out.col(f), g);
}

} // namespace

AgentSet permute_agents(const AgentSet& set, std::span<const Index> gather) {
    if (gather.size() != static_cast<std::size_t>(set.capacity()))
        throw DomainError("permutation length must equal capacity");
    AgentSet out = set;
    for (std::size_t i = 0; i < gather.size(); ++i) {
        const auto s = static_cast<std::size_t>(gather[i]);
        out.active_[i] = set.active_[s];
        out.ids_[i] = set.ids_[s];
        out.types_[i] = set.types_[s];
        out.ages_[i] = set.ages_[s];
    }
    gather_bundle(set.state_, out.state_, gather);
    gather_bundle(set.params_, out.params_, gather);
    gather_bundle(set.policy_state_, out.policy_state_, gather);
    gather_bundle(set.policy_params_, out.policy_params_, gather);
    return out;
}

bool bitwise_equal(const AgentSet& a, const AgentSet& b) {
    return a.capacity_ == b.capacity_ && a.num_active_ == b.num_active_ &&
           a.next_id_ == b.next_id_ && a.recycle_ids_ == b.recycle_ids_ &&
           a.retired_ids_ == b.retired_ids_ && a.active_ == b.active_ && a.ids_ == b.ids_ &&
           a.types_ == b.types_ && a.ages_ == b.ages_ &&
           bitwise_equal(a.state_, b.state_) && bitwise_equal(a.params_, b.params_) &&
           bitwise_equal(a.policy_state_, b.policy_state_) &&
           bitwise_equal(a.policy_params_, b.policy_params_);
}

} // namespace abmx
