#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "abmx/models/predation.hpp"
#include "support/oracle.hpp"

using namespace abmx;
using namespace abmx::models;

namespace {

double total_energy(const AgentSet& set) {
    double sum = 0.0;
    for (const double e : set.state().reals("energy"))
        sum += e;
    return sum;
}

// ledger recomputed from event counters; must hold exactly
void check_energy_ledger(const AgentSet& before, const AgentSet& after,
                         const SpeciesEvents& ev, double eats_gain, std::int64_t eats,
                         double metabolism) {
    const double lhs = total_energy(after) - total_energy(before);
    const double rhs = static_cast<double>(eats) * eats_gain -
                       static_cast<double>(ev.metabolized) * metabolism -
                       ev.energy_removed_deaths - ev.energy_dropped_births;
    CHECK(lhs == rhs);
}

void check_invariants(const PredationState& s, const PredationConfig& cfg) {
    REQUIRE(s.sheep.capacity() == cfg.sheep_capacity);
    REQUIRE(s.wolves.capacity() == cfg.wolf_capacity);
    REQUIRE(s.sheep.count_active() == s.sheep.num_active());
    REQUIRE(s.wolves.count_active() == s.wolves.num_active());
    for (const AgentSet* set : {&s.sheep, &s.wolves}) {
        std::set<std::int64_t> ids;
        auto act = set->active();
        auto id = set->ids();
        for (std::size_t i = 0; i < act.size(); ++i)
            if (act[i])
                REQUIRE(ids.insert(id[i]).second);
    }
    for (std::size_t c = 0; c < s.world.cells(); ++c)
        REQUIRE((s.world.grass_ready[c] != 0) == (s.world.regrow[c] == 0));
}

PredationConfig tiny() {
    PredationConfig c;
    c.width = 12;
    c.height = 12;
    c.n_sheep0 = 30;
    c.n_wolves0 = 15;
    c.sheep_capacity = 400;
    c.wolf_capacity = 400;
    c.regrow_delay = 10;
    return c;
}

} // namespace

TEST_CASE("metrics on an empty world count all grass") {
    PredationConfig c = tiny();
    c.n_sheep0 = 0;
    c.n_wolves0 = 0;
    const PredationState s = init_predation(c, RngState{1});
    const PredationMetrics m = metrics_predation(s.world, s.sheep, s.wolves);
    CHECK(m.n_sheep == 0);
    CHECK(m.n_wolves == 0);
    CHECK(m.n_grass == c.width * c.height);
}

TEST_CASE("initial counts reach the metrics") {
    PredationConfig c;
    c.width = 100;
    c.height = 100;
    c.n_sheep0 = 600;
    c.n_wolves0 = 400;
    c.sheep_capacity = 20000;
    c.wolf_capacity = 20000;
    const PredationState s = init_predation(c, RngState{2});
    const PredationMetrics m = metrics_predation(s.world, s.sheep, s.wolves);
    CHECK(m.n_sheep == 600);
    CHECK(m.n_wolves == 400);
    CHECK(m.n_sheep == s.sheep.num_active());
}

TEST_CASE("no animals: only regrow counters change") {
    PredationConfig c = tiny();
    c.n_sheep0 = 0;
    c.n_wolves0 = 0;
    PredationState s = init_predation(c, RngState{3});
    s.world.grass_ready[5] = 0;
    s.world.regrow[5] = 3;
    PredationEvents ev;
    const PredationState out = step_predation(s, c, RngState{3}, 1, &ev);
    CHECK(out.world.regrow[5] == 2);
    CHECK(out.world.grass_ready[5] == 0);
    CHECK(ev.grass_eaten == 0);
    CHECK(bitwise_equal(out.sheep, s.sheep));
    CHECK(bitwise_equal(out.wolves, s.wolves));
}

TEST_CASE("a sheep whose energy cannot cover metabolism dies this step") {
    PredationConfig c = tiny();
    c.n_sheep0 = 1;
    c.n_wolves0 = 0;
    c.metabolism = 2.0;
    PredationState s = init_predation(c, RngState{4});
    s.sheep.state_mut().reals("energy")[0] = 1.0;
    // no grass anywhere
    std::fill(s.world.grass_ready.begin(), s.world.grass_ready.end(), 0);
    std::fill(s.world.regrow.begin(), s.world.regrow.end(), 5);

    PredationEvents ev;
    const PredationState out = step_predation(s, c, RngState{4}, 1, &ev);
    CHECK(s.sheep.num_active() == 1);
    CHECK(out.sheep.num_active() == 0);
    CHECK(ev.sheep.deaths == 1);
    CHECK(ev.sheep.energy_removed_deaths == -1.0); // 1.0 - 2.0
}

TEST_CASE("ready grass feeds at most one sheep per cell, lowest slot wins") {
    PredationConfig c = tiny();
    c.width = 1;
    c.height = 1; // a single cell keeps both sheep together after moving
    c.n_sheep0 = 2;
    c.n_wolves0 = 0;
    c.reproduce_prob_sheep = 0.0;
    PredationState s = init_predation(c, RngState{5});
    auto e0 = s.sheep.state_mut().reals("energy");
    e0[0] = 5.0;
    e0[1] = 6.0;
    const double a = e0[0], b = e0[1];

    PredationEvents ev;
    const PredationState out = step_predation(s, c, RngState{5}, 1, &ev);
    CHECK(ev.grass_eaten == 1);
    auto e1 = out.sheep.state().reals("energy");
    CHECK(e1[0] == a + c.energy_gain_sheep - c.metabolism);
    CHECK(e1[1] == b - c.metabolism);
    check_energy_ledger(s.sheep, out.sheep, ev.sheep, c.energy_gain_sheep, ev.grass_eaten,
                        c.metabolism);
}

TEST_CASE("a wolf and a sheep on one cell: sheep dies, wolf gains fixed energy") {
    PredationConfig c = tiny();
    c.width = 1;
    c.height = 1; // toroidal 1x1 lattice pins everyone to cell (0,0)
    c.n_sheep0 = 1;
    c.n_wolves0 = 1;
    c.reproduce_prob_sheep = 0.0;
    c.reproduce_prob_wolf = 0.0;
    PredationState s = init_predation(c, RngState{6});
    const double wolf_e0 = s.wolves.state().reals("energy")[0];

    PredationEvents ev;
    const PredationState out = step_predation(s, c, RngState{6}, 1, &ev);
    CHECK(ev.sheep_eaten_by_wolves == 1);
    CHECK(out.sheep.num_active() == 0);
    CHECK(out.wolves.num_active() == 1);
    CHECK(out.wolves.state().reals("energy")[0] ==
          wolf_e0 + c.energy_gain_wolf - c.metabolism);
    // pairing is one sheep per wolf: a second wolf would get nothing
}

TEST_CASE("two wolves, one sheep: only one eats") {
    PredationConfig c = tiny();
    c.width = 1;
    c.height = 1;
    c.n_sheep0 = 1;
    c.n_wolves0 = 2;
    c.reproduce_prob_wolf = 0.0;
    PredationState s = init_predation(c, RngState{7});
    PredationEvents ev;
    step_predation(s, c, RngState{7}, 1, &ev);
    CHECK(ev.sheep_eaten_by_wolves == 1);
}

TEST_CASE("offspring are born on the parent cell") {
    PredationConfig c = tiny();
    c.reproduce_prob_sheep = 0.9;
    c.reproduce_prob_wolf = 0.9;
    PredationState s = init_predation(c, RngState{8});
    std::int64_t births_seen = 0;
    for (std::int64_t t = 1; t <= 6; ++t) {
        PredationEvents ev;
        const PredationState out = step_predation(s, c, RngState{8}, t, &ev);
        for (const auto* pair : {&ev.sheep.birth_pairs, &ev.wolves.birth_pairs}) {
            const AgentSet& set = pair == &ev.sheep.birth_pairs ? out.sheep : out.wolves;
            auto xs = set.state().ints("x");
            auto ys = set.state().ints("y");
            for (const auto& [parent, child] : *pair) {
                REQUIRE(xs[static_cast<std::size_t>(child)] == xs[static_cast<std::size_t>(parent)]);
                REQUIRE(ys[static_cast<std::size_t>(child)] == ys[static_cast<std::size_t>(parent)]);
                REQUIRE(set.ages()[static_cast<std::size_t>(child)] == 0);
                ++births_seen;
            }
        }
        s = out;
    }
    CHECK(births_seen > 0);
}

TEST_CASE("capacity overflow truncates births and reports them") {
    PredationConfig c = tiny();
    c.n_sheep0 = 8;
    c.sheep_capacity = 8; // no free slots at all
    c.n_wolves0 = 0;
    c.reproduce_prob_sheep = 1.0;
    PredationState s = init_predation(c, RngState{9});
    // make everyone fertile
    for (auto& e : s.sheep.state_mut().reals("energy"))
        e = 10.0;
    PredationEvents ev;
    const PredationState out = step_predation(s, c, RngState{9}, 1, &ev);
    CHECK(out.sheep.num_active() <= c.sheep_capacity);
    CHECK(ev.sheep.births == 0);
    CHECK(ev.sheep.births_dropped > 0);
    CHECK(ev.sheep.energy_dropped_births > 0.0);
    check_energy_ledger(s.sheep, out.sheep, ev.sheep, c.energy_gain_sheep, ev.grass_eaten,
                        c.metabolism);
}

TEST_CASE("energy ledger balances exactly over a run") {
    const PredationConfig c = tiny();
    PredationState s = init_predation(c, RngState{10});
    for (std::int64_t t = 1; t <= 40; ++t) {
        PredationEvents ev;
        const PredationState out = step_predation(s, c, RngState{10}, t, &ev);
        check_energy_ledger(s.sheep, out.sheep, ev.sheep, c.energy_gain_sheep, ev.grass_eaten,
                            c.metabolism);
        check_energy_ledger(s.wolves, out.wolves, ev.wolves, c.energy_gain_wolf,
                            ev.sheep_eaten_by_wolves, c.metabolism);
        check_invariants(out, c);
        s = out;
    }
}

TEST_CASE("wolf energy gains equal predation deaths per step") {
    const PredationConfig c = tiny();
    PredationState s = init_predation(c, RngState{11});
    for (std::int64_t t = 1; t <= 20; ++t) {
        PredationEvents ev;
        const PredationState out = step_predation(s, c, RngState{11}, t, &ev);
        // every predation kill is exactly one sheep death recorded in phase 2
        CHECK(ev.sheep_eaten_by_wolves <= ev.sheep.deaths);
        s = out;
    }
}

TEST_CASE("identical seeds give bitwise-identical runs") {
    const PredationConfig c = tiny();
    PredationState a = init_predation(c, RngState{12});
    PredationState b = init_predation(c, RngState{12});
    for (std::int64_t t = 1; t <= 10; ++t) {
        a = step_predation(a, c, RngState{12}, t);
        b = step_predation(b, c, RngState{12}, t);
    }
    CHECK(bitwise_equal(a.sheep, b.sheep));
    CHECK(bitwise_equal(a.wolves, b.wolves));
    CHECK(a.world.grass_ready == b.world.grass_ready);
    CHECK(a.world.regrow == b.world.regrow);
}

TEST_CASE("movement replays the documented stream") {
    PredationConfig c = tiny();
    c.n_sheep0 = 5;
    c.n_wolves0 = 0;
    c.reproduce_prob_sheep = 0.0;
    c.metabolism = 0.0;
    const RngState seed{13};
    PredationState s = init_predation(c, seed);
    std::fill(s.world.grass_ready.begin(), s.world.grass_ready.end(), 0);
    std::fill(s.world.regrow.begin(), s.world.regrow.end(), 100);

    const PredationState out = step_predation(s, c, seed, 1);

    constexpr int neigh[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                 {0, 1},   {1, -1}, {1, 0},  {1, 1}};
    const abmx_test::ReplayRng stream = abmx_test::ReplayRng{seed.key}
                                            .split(static_cast<std::uint64_t>(StreamTag::PredMove))
                                            .split(1)
                                            .split(0);
    auto x0 = s.sheep.state().ints("x");
    auto y0 = s.sheep.state().ints("y");
    auto x1 = out.sheep.state().ints("x");
    auto y1 = out.sheep.state().ints("y");
    for (std::size_t i = 0; i < 5; ++i) {
        const auto u = static_cast<std::size_t>(stream.uniform_int(i, 0, 8));
        CHECK(x1[i] == (x0[i] + neigh[u][0] + c.width) % c.width);
        CHECK(y1[i] == (y0[i] + neigh[u][1] + c.height) % c.height);
    }
}
