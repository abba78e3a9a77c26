#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "abmx/lifecycle.hpp"
#include "support/oracle.hpp"

using namespace abmx;
using abmx_test::ReplayRng;

namespace {

AgentSchema energy_schema(double value) {
    AgentSchema s;
    s.state = {FieldInit::const_real("energy", value)};
    return s;
}

bool ids_of_active_distinct(const AgentSet& set) {
    std::set<std::int64_t> seen;
    auto act = set.active();
    auto ids = set.ids();
    for (std::size_t i = 0; i < act.size(); ++i) {
        if (!act[i])
            continue;
        if (!seen.insert(ids[i]).second)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("create: empty set") {
    const AgentSet s = create_agents(4, 0, energy_schema(0.0), RngState{1});
    CHECK(s.capacity() == 4);
    CHECK(s.num_active() == 0);
    for (const auto a : s.active())
        CHECK(a == 0);
}

TEST_CASE("create: full set with constant init") {
    const AgentSet s = create_agents(4, 4, energy_schema(5.0), RngState{1});
    CHECK(s.num_active() == 4);
    auto e = s.state().reals("energy");
    auto ids = s.ids();
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(s.active()[i] == 1);
        CHECK(ids[i] == static_cast<std::int64_t>(i));
        CHECK(e[i] == 5.0);
        CHECK(s.ages()[i] == 0);
    }
    CHECK(s.next_id() == 4);
}

TEST_CASE("create: seeded uniform init replays the documented schedule") {
    AgentSchema schema;
    schema.state = {FieldInit::uniform_int("e", 0, 10)};
    const RngState seed{777};
    const AgentSet s = create_agents(3, 2, schema, seed);

    const ReplayRng stream = ReplayRng{seed.key}
                                 .split(static_cast<std::uint64_t>(StreamTag::CreateField))
                                 .split(0);
    auto e = s.state().ints("e");
    CHECK(s.active()[0] == 1);
    CHECK(s.active()[1] == 1);
    CHECK(s.active()[2] == 0);
    CHECK(e[0] == stream.uniform_int(0, 0, 10));
    CHECK(e[1] == stream.uniform_int(1, 0, 10));
    CHECK(e[2] == 0); // placeholder holds the default
}

TEST_CASE("create: errors") {
    CHECK_THROWS_AS(create_agents(2, 3, energy_schema(0.0), RngState{0}), CapacityError);
    AgentSchema dup;
    dup.state = {FieldInit::const_int("x", 0), FieldInit::const_int("x", 1)};
    CHECK_THROWS_AS(create_agents(2, 1, dup, RngState{0}), SchemaError);
}

TEST_CASE("step: identity bumps ages of active agents only") {
    AgentSet s = create_agents(3, 2, energy_schema(1.0), RngState{4});
    const AgentSet out = step_agents(s, [](const SlotView&, const FieldBundle*, StateWriter&) {});
    CHECK(out.ages()[0] == 1);
    CHECK(out.ages()[1] == 1);
    CHECK(out.ages()[2] == 0);
    CHECK(out.state().reals("energy")[0] == 1.0);
    const AgentSet frozen =
        step_agents(s, [](const SlotView&, const FieldBundle*, StateWriter&) {}, nullptr, false);
    CHECK(bitwise_equal(frozen, s));
}

TEST_CASE("step: constant decrement") {
    AgentSet s = create_agents(2, 2, energy_schema(0.0), RngState{4});
    auto e = s.state_mut().reals("energy");
    e[0] = 5.0;
    e[1] = 7.0;
    const AgentSet out = step_agents(s, [](const SlotView& v, const FieldBundle*, StateWriter& w) {
        w.set_real("energy", v.state_real("energy") - 1.0);
    });
    CHECK(out.state().reals("energy")[0] == 4.0);
    CHECK(out.state().reals("energy")[1] == 6.0);
}

TEST_CASE("step: placeholder slots come back as defaults") {
    AgentSet s = create_agents(3, 3, energy_schema(0.0), RngState{4});
    auto e = s.state_mut().reals("energy");
    e[0] = 5.0;
    e[1] = 7.0;
    e[2] = 9.0;
    s.active_mut()[1] = 0; // artificially dead slot with non-default state
    s.set_num_active(2);
    const AgentSet out = step_agents(s, [](const SlotView& v, const FieldBundle*, StateWriter& w) {
        w.set_real("energy", v.state_real("energy") - 1.0);
    });
    CHECK(out.state().reals("energy")[0] == 4.0);
    CHECK(out.state().reals("energy")[1] == 0.0);
    CHECK(out.state().reals("energy")[2] == 8.0);
}

TEST_CASE("step: shared input reaches the transition") {
    AgentSet s = create_agents(2, 2, energy_schema(1.0), RngState{4});
    FieldBundle shared(1);
    shared.add_real("boost", 10.0);
    const AgentSet out =
        step_agents(s, [](const SlotView& v, const FieldBundle* sh, StateWriter& w) {
            w.set_real("energy", v.state_real("energy") + sh->reals("boost")[0]);
        }, &shared);
    CHECK(out.state().reals("energy")[0] == 11.0);
}

TEST_CASE("step: unknown output field is a schema error") {
    AgentSet s = create_agents(2, 2, energy_schema(1.0), RngState{4});
    CHECK_THROWS_AS(step_agents(s, [](const SlotView&, const FieldBundle*, StateWriter& w) {
                        w.set_real("no_such_field", 1.0);
                    }),
                    SchemaError);
    CHECK_THROWS_AS(step_agents(s, [](const SlotView&, const FieldBundle*, StateWriter& w) {
                        w.set_int("energy", 1); // wrong kind
                    }),
                    SchemaError);
}

TEST_CASE("remove: all-false mask is a no-op") {
    const AgentSet s = create_agents(3, 2, energy_schema(2.0), RngState{5});
    const Mask none(3, 0);
    CHECK(bitwise_equal(remove_agents(s, none), s));
}

TEST_CASE("remove: middle slot") {
    const AgentSet s = create_agents(3, 3, energy_schema(2.0), RngState{5});
    const Mask kill = {0, 1, 0};
    const AgentSet out = remove_agents(s, kill);
    CHECK(out.num_active() == 2);
    CHECK(out.active()[0] == 1);
    CHECK(out.active()[1] == 0);
    CHECK(out.active()[2] == 1);
    CHECK(out.state().reals("energy")[1] == 0.0); // reset to placeholder
}

TEST_CASE("remove: masking a dead slot is a no-op") {
    AgentSet s = create_agents(2, 2, energy_schema(2.0), RngState{5});
    s.active_mut()[1] = 0;
    s.set_num_active(1);
    const Mask kill = {1, 1};
    const AgentSet out = remove_agents(s, kill);
    CHECK(out.num_active() == 0);
    CHECK(out.active()[0] == 0);
    CHECK(out.active()[1] == 0);
}

TEST_CASE("policy bundles ride along through create, step and permute") {
    AgentSchema schema;
    schema.state = {FieldInit::const_real("energy", 1.0)};
    schema.policy_state = {FieldInit::uniform_real("memory", 0.0, 1.0)};
    schema.policy_params = {FieldInit::const_real("gain", 0.25)};
    const AgentSet s = create_agents(3, 3, schema, RngState{21});
    CHECK(s.policy_params().reals("gain")[2] == 0.25);

    const AgentSet stepped =
        step_agents(s, [](const SlotView&, const FieldBundle*, StateWriter&) {});
    CHECK(bitwise_equal(stepped.policy_state(), s.policy_state()));

    const std::vector<Index> perm = {2, 0, 1};
    const AgentSet rotated = permute_agents(s, perm);
    CHECK(rotated.policy_state().reals("memory")[0] == s.policy_state().reals("memory")[2]);
}

TEST_CASE("id recycling is opt-in") {
    const auto spawn_one = [](const AgentSet& set) {
        const auto n = static_cast<std::size_t>(set.capacity());
        FieldBundle vals(n);
        vals.add_real("energy", 3.0);
        Mask valid(n, 0);
        valid[0] = 1;
        return spawn_agents(set, UpdateBatch(std::move(vals), std::move(valid)),
                            [](StateWriter& w, const SlotView&, const RowView& r, Index) {
                                w.set_real("energy", r.get_real("energy"));
                            });
    };

    SUBCASE("default: retired ids never come back") {
        AgentSet s = create_agents(3, 3, energy_schema(1.0), RngState{6});
        s = remove_agents(s, Mask{0, 1, 0}); // retires id 1
        const auto out = spawn_one(s);
        CHECK(out.spawned == 1);
        CHECK(out.set.ids()[1] == 3); // fresh id, slot 1 was the free one
        CHECK(out.set.next_id() == 4);
    }
    SUBCASE("enabled: the retired id is reused") {
        AgentSet s = create_agents(3, 3, energy_schema(1.0), RngState{6});
        s.set_id_recycling(true);
        s = remove_agents(s, Mask{0, 1, 0});
        const auto out = spawn_one(s);
        CHECK(out.set.ids()[1] == 1);
        CHECK(out.set.next_id() == 3);
        CHECK(ids_of_active_distinct(out.set));
    }
}

TEST_CASE("property: random create/step/remove/spawn sequences keep invariants") {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const Index capacity = std::uniform_int_distribution<Index>(1, 32)(gen);
        const Index n0 = std::uniform_int_distribution<Index>(0, capacity)(gen);
        AgentSchema schema;
        schema.state = {FieldInit::uniform_int("e", 0, 50)};
        AgentSet set = create_agents(capacity, n0, schema, RngState{gen()});

        for (int op = 0; op < 20; ++op) {
            switch (gen() % 3) {
            case 0:
                set = step_agents(set, [](const SlotView& v, const FieldBundle*, StateWriter& w) {
                    w.set_int("e", v.state_int("e") + 1);
                });
                break;
            case 1: {
                const Mask kill = abmx_test::random_mask(gen, static_cast<std::size_t>(capacity), 0.2);
                set = remove_agents(set, kill);
                break;
            }
            case 2: {
                const auto m = static_cast<std::size_t>(capacity);
                FieldBundle vals(m);
                vals.add_int("e", 7);
                UpdateBatch rows(std::move(vals), abmx_test::random_mask(gen, m, 0.3));
                set = spawn_agents(set, rows,
                                   [](StateWriter& w, const SlotView&, const RowView& r, Index) {
                                       w.set_int("e", r.get_int("e"));
                                   })
                          .set;
                break;
            }
            }
            REQUIRE(set.capacity() == capacity);
            REQUIRE(set.count_active() == set.num_active());
            REQUIRE(ids_of_active_distinct(set));
            for (const auto age : set.ages())
                REQUIRE(age >= 0);
        }
    }
}

TEST_CASE("property: step commutes with permutation") {
    std::mt19937_64 gen(77);
    for (int trial = 0; trial < 30; ++trial) {
        const Index capacity = std::uniform_int_distribution<Index>(1, 24)(gen);
        const AgentSet set = abmx_test::random_set(gen, capacity);

        std::vector<Index> perm(static_cast<std::size_t>(capacity));
        std::iota(perm.begin(), perm.end(), Index{0});
        std::shuffle(perm.begin(), perm.end(), gen);

        const TransitionFn fn = [](const SlotView& v, const FieldBundle*, StateWriter& w) {
            w.set_int("e", v.state_int("e") * 2 - 1);
            w.set_real("w", v.state_real("w") * 0.5);
        };
        const AgentSet a = permute_agents(step_agents(set, fn), perm);
        const AgentSet b = step_agents(permute_agents(set, perm), fn);
        REQUIRE(bitwise_equal(a, b));
    }
}
