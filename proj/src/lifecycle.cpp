#include "abmx/lifecycle.hpp"

#include <algorithm>

#include "abmx/simd/kernels.hpp"

namespace abmx {

namespace {

Column materialize(const FieldInit& f, std::size_t n, const RngState& stream) {
    return std::visit(
        [&](const auto& init) -> Column {
            using T = std::decay_t<decltype(init)>;
            if constexpr (std::is_same_v<T, FieldInit::ConstInt>) {
                return Column::ints(n, init.value);
            } else if constexpr (std::is_same_v<T, FieldInit::ConstReal>) {
                return Column::reals(n, init.value);
            } else if constexpr (std::is_same_v<T, FieldInit::ConstBool>) {
                return Column::bools(n, init.value);
            } else if constexpr (std::is_same_v<T, FieldInit::UniformInt>) {
                std::vector<std::int64_t> v(n);
                for (std::size_t i = 0; i < n; ++i)
                    v[i] = stream.uniform_int(i, init.lo, init.hi);
                return Column::of(std::move(v));
            } else if constexpr (std::is_same_v<T, FieldInit::UniformIntAsReal>) {
                std::vector<double> v(n);
                for (std::size_t i = 0; i < n; ++i)
                    v[i] = static_cast<double>(stream.uniform_int(i, init.lo, init.hi));
                return Column::of(std::move(v));
            } else {
                std::vector<double> v(n);
                for (std::size_t i = 0; i < n; ++i)
                    v[i] = init.lo + (init.hi - init.lo) * stream.uniform_double(i);
                return Column::of(std::move(v));
            }
        },
        f.init);
}

FieldBundle build_bundle(const std::vector<FieldInit>& inits, std::size_t n,
                         RngState field_root, std::size_t& field_ordinal) {
    FieldBundle b(n);
    for (const auto& f : inits) {
        b.add(f.name, materialize(f, n, field_root.split(field_ordinal)));
        ++field_ordinal;
    }
    return b;
}

} // namespace

AgentSet create_agents(Index capacity, Index num_active, const AgentSchema& schema,
                       RngState seed, std::int64_t agent_type) {
    if (capacity < 0)
        throw CapacityError("negative capacity");
    if (num_active < 0 || num_active > capacity)
        throw CapacityError("num_active exceeds capacity");

    const auto n = static_cast<std::size_t>(capacity);
    const RngState field_root = seed.split(StreamTag::CreateField);
    std::size_t ordinal = 0;
    FieldBundle state = build_bundle(schema.state, n, field_root, ordinal);
    FieldBundle params = build_bundle(schema.params, n, field_root, ordinal);
    FieldBundle pol_state = build_bundle(schema.policy_state, n, field_root, ordinal);
    FieldBundle pol_params = build_bundle(schema.policy_params, n, field_root, ordinal);

    AgentSet set(capacity, std::move(state), std::move(params), std::move(pol_state),
                 std::move(pol_params));
    auto act = set.active_mut();
    auto ids = set.ids_mut();
    auto types = set.types_mut();
    for (Index i = 0; i < capacity; ++i)
        types[static_cast<std::size_t>(i)] = agent_type;
    for (Index i = 0; i < num_active; ++i) {
        act[static_cast<std::size_t>(i)] = 1;
        ids[static_cast<std::size_t>(i)] = i;
    }
    // Placeholder slots hold plain defaults regardless of initializer draws.
    for (Index i = num_active; i < capacity; ++i)
        set.reset_slot(i);
    set.set_num_active(num_active);
    set.set_next_id(num_active);
    return set;
}

AgentSet step_agents(const AgentSet& set, const TransitionFn& fn,
                     const FieldBundle* shared_input, bool increment_age) {
    AgentSet out = set;
    for (Index i = 0; i < set.capacity(); ++i) {
        SlotView view(set, i);
        StateWriter w(out, i);
        fn(view, shared_input, w);
    }
    auto act = set.active();
    // Mask placeholder outputs back to schema defaults.
    const auto n = static_cast<std::size_t>(set.capacity());
    FieldBundle& st = out.state_mut();
    for (std::size_t f = 0; f < st.field_count(); ++f) {
        Column& c = st.col(f);
        Column zeros = Column::zeros(c.kind(), n);
        const auto& tab = simd::active();
        switch (c.kind()) {
        case Kind::Int:
            tab.blend_i64(act.data(), c.ints().data(), zeros.ints().data(), c.ints().data(), n);
            break;
        case Kind::Real:
            tab.blend_f64(act.data(), c.reals().data(), zeros.reals().data(), c.reals().data(), n);
            break;
        case Kind::Bool:
            tab.blend_u8(act.data(), c.bools().data(), zeros.bools().data(), c.bools().data(), n);
            break;
        }
    }
    if (increment_age) {
        auto ages = out.ages_mut();
        for (std::size_t i = 0; i < n; ++i)
            if (act[i])
                ++ages[i];
    }
    return out;
}

AgentSet remove_agents(const AgentSet& set, std::span<const std::uint8_t> kill_mask) {
    if (kill_mask.size() != static_cast<std::size_t>(set.capacity()))
        throw DomainError("kill mask length must equal capacity");
    AgentSet out = set;
    auto act = out.active_mut();
    auto ids = out.ids();
    Index killed = 0;
    for (Index i = 0; i < set.capacity(); ++i) {
        const auto s = static_cast<std::size_t>(i);
        if (act[s] && kill_mask[s]) {
            if (out.id_recycling())
                out.retired_ids().push_back(ids[s]);
            out.reset_slot(i);
            ++killed;
        }
    }
    out.set_num_active(out.num_active() - killed);
    return out;
}

SpawnOutcome spawn_agents(const AgentSet& set, const UpdateBatch& newborns,
                          const ApplyFn& apply, std::optional<std::int64_t> agent_type) {
    const auto n = static_cast<std::size_t>(set.capacity());
    Mask free(n);
    auto act = set.active();
    for (std::size_t i = 0; i < n; ++i)
        free[i] = act[i] ? 0 : 1;

    const auto slot_ranks = compute_ranks(free);
    const auto row_ranks = compute_ranks({newborns.valid.data(), newborns.valid.size()});
    const auto matched = detail::match_rows(slot_ranks, row_ranks);

    SpawnOutcome o{set, 0, 0, {}, {}};
    const Index q = count_true({newborns.valid.data(), newborns.valid.size()});
    std::vector<std::pair<Index, Index>> pairs; // (slot, row) keyed by pair order
    for (Index i = 0; i < set.capacity(); ++i) {
        const std::int32_t row = matched[static_cast<std::size_t>(i)];
        if (row >= 0)
            pairs.emplace_back(i, static_cast<Index>(row));
    }
    // pairs are already in ascending slot order == ascending pair rank
    auto ids = o.set.ids_mut();
    auto ages = o.set.ages_mut();
    auto types = o.set.types_mut();
    auto out_act = o.set.active_mut();
    std::int64_t id = o.set.next_id();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [slot, row] = pairs[k];
        StateWriter w(o.set, slot);
        SlotView view(set, slot);
        RowView rv(newborns, row);
        apply(w, view, rv, static_cast<Index>(k));
        const auto s = static_cast<std::size_t>(slot);
        out_act[s] = 1;
        if (o.set.id_recycling() && !o.set.retired_ids().empty()) {
            ids[s] = o.set.retired_ids().back();
            o.set.retired_ids().pop_back();
        } else {
            ids[s] = id++;
        }
        ages[s] = 0;
        if (agent_type)
            types[s] = *agent_type;
        o.slots.push_back(slot);
        o.rows.push_back(row);
    }
    o.spawned = static_cast<Index>(pairs.size());
    o.dropped = q - o.spawned;
    o.set.set_next_id(id);
    o.set.set_num_active(o.set.num_active() + o.spawned);
    return o;
}

} // namespace abmx
