#include "abmx/models/predation.hpp"

#include <cmath>

namespace abmx::models {

namespace {

constexpr std::uint64_t kSheepCreate = 20;
constexpr std::uint64_t kWolfCreate = 21;

// Neighbor order used by the move draw (dx, dy), row-major around the cell.
constexpr int kNeighbors[8][2] = {
    {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1},
};

std::size_t cell_of(Index width, std::int64_t x, std::int64_t y) {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
}

AgentSet create_species(Index capacity, Index n0, Index width, Index height,
                        double energy_gain, RngState seed, std::int64_t type) {
    AgentSchema schema;
    schema.state = {
        FieldInit::uniform_int("x", 0, width),
        FieldInit::uniform_int("y", 0, height),
        // integer-valued energies keep every later update on the dyadic grid
        FieldInit::uniform_int_as_real("energy", 1,
                                       2 * static_cast<std::int64_t>(energy_gain) + 1),
    };
    return create_agents(capacity, n0, schema, seed, type);
}

AgentSet move_species(const AgentSet& set, Index width, Index height, RngState stream) {
    TransitionFn fn = [&](const SlotView& v, const FieldBundle*, StateWriter& w) {
        if (!v.is_active())
            return;
        const auto u = static_cast<std::size_t>(
            stream.uniform_int(static_cast<std::uint64_t>(v.slot()), 0, 8));
        const std::int64_t nx =
            (v.state_int("x") + kNeighbors[u][0] + width) % width;
        const std::int64_t ny =
            (v.state_int("y") + kNeighbors[u][1] + height) % height;
        w.set_int("x", nx);
        w.set_int("y", ny);
    };
    return step_agents(set, fn);
}

void metabolize(AgentSet& set, double metabolism, SpeciesEvents& ev) {
    auto act = set.active();
    auto energy = set.state_mut().reals("energy");
    for (std::size_t i = 0; i < act.size(); ++i) {
        if (!act[i])
            continue;
        energy[i] -= metabolism;
        ++ev.metabolized;
    }
}

AgentSet die_if_starved(const AgentSet& set, SpeciesEvents& ev) {
    auto act = set.active();
    auto energy = set.state().reals("energy");
    Mask kill(act.size(), 0);
    for (std::size_t i = 0; i < act.size(); ++i) {
        if (act[i] && energy[i] <= 0.0) {
            kill[i] = 1;
            ev.energy_removed_deaths += energy[i];
            ++ev.deaths;
        }
    }
    return remove_agents(set, kill);
}

AgentSet reproduce(const AgentSet& set, const PredationConfig& cfg, double prob,
                   RngState stream, std::int64_t type, SpeciesEvents& ev) {
    const auto n = static_cast<std::size_t>(set.capacity());
    AgentSet parents = set;
    auto act = parents.active();
    auto energy = parents.state_mut().reals("energy");
    auto xs = parents.state().ints("x");
    auto ys = parents.state().ints("y");

    FieldBundle vals(n);
    vals.add("x", Column::ints(n));
    vals.add("y", Column::ints(n));
    vals.add("energy", Column::reals(n));
    auto cx = vals.ints("x");
    auto cy = vals.ints("y");
    auto ce = vals.reals("energy");
    Mask valid(n, 0);

    // Eligibility: alive and energy above metabolism; the row index equals
    // the parent slot.
    for (std::size_t i = 0; i < n; ++i) {
        if (!act[i] || energy[i] <= cfg.metabolism)
            continue;
        if (!stream.bernoulli(i, prob))
            continue;
        const double child = quantize_energy(cfg.reproduce_energy_frac * energy[i]);
        energy[i] -= child; // exact: both on the grid
        cx[i] = xs[i];
        cy[i] = ys[i];
        ce[i] = child;
        valid[i] = 1;
    }

    UpdateBatch newborns(std::move(vals), std::move(valid));
    const ApplyFn birth = [](StateWriter& w, const SlotView&, const RowView& row, Index) {
        w.set_int("x", row.get_int("x"));
        w.set_int("y", row.get_int("y"));
        w.set_real("energy", row.get_real("energy"));
    };
    SpawnOutcome o = spawn_agents(parents, newborns, birth, type);

    ev.births += o.spawned;
    ev.births_dropped += o.dropped;
    for (std::size_t k = 0; k < o.rows.size(); ++k)
        ev.birth_pairs.emplace_back(o.rows[k], o.slots[k]);
    if (o.dropped > 0) {
        // Rows are valid in slot order; the spawned ones are the first
        // `spawned` valid rows, the rest carry energy that was paid but not
        // transferred.
        Index seen = 0;
        auto rows_valid = newborns.valid;
        auto ce2 = newborns.values.reals("energy");
        for (std::size_t i = 0; i < n; ++i) {
            if (!rows_valid[i])
                continue;
            if (seen >= o.spawned)
                ev.energy_dropped_births += ce2[i];
            ++seen;
        }
    }
    return std::move(o.set);
}

} // namespace

double quantize_energy(double x) {
    return std::floor(x / kEnergyGranule) * kEnergyGranule;
}

PredationWorld PredationWorld::full_grass(Index width, Index height) {
    PredationWorld w;
    w.width = width;
    w.height = height;
    w.grass_ready.assign(w.cells(), 1);
    w.regrow.assign(w.cells(), 0);
    return w;
}

PredationState init_predation(const PredationConfig& cfg, RngState seed) {
    if (cfg.n_sheep0 > cfg.sheep_capacity || cfg.n_wolves0 > cfg.wolf_capacity)
        throw CapacityError("initial counts exceed capacities");
    PredationState s{
        PredationWorld::full_grass(cfg.width, cfg.height),
        create_species(cfg.sheep_capacity, cfg.n_sheep0, cfg.width, cfg.height,
                       cfg.energy_gain_sheep, seed.split(kSheepCreate), 0),
        create_species(cfg.wolf_capacity, cfg.n_wolves0, cfg.width, cfg.height,
                       cfg.energy_gain_wolf, seed.split(kWolfCreate), 1),
    };
    return s;
}

PredationState step_predation(const PredationState& in, const PredationConfig& cfg,
                              RngState seed, std::int64_t t, PredationEvents* events_out) {
    PredationEvents ev;
    PredationState s = in;
    const auto ut = static_cast<std::uint64_t>(t);

    // 1. move
    const RngState move_root = seed.split(StreamTag::PredMove).split(ut);
    s.sheep = move_species(s.sheep, cfg.width, cfg.height, move_root.split(0));
    s.wolves = move_species(s.wolves, cfg.width, cfg.height, move_root.split(1));

    // 2a. graze: one sheep per ready cell, lowest slot wins
    {
        auto act = s.sheep.active();
        auto xs = s.sheep.state().ints("x");
        auto ys = s.sheep.state().ints("y");
        auto energy = s.sheep.state_mut().reals("energy");
        for (std::size_t i = 0; i < act.size(); ++i) {
            if (!act[i])
                continue;
            const std::size_t c = cell_of(cfg.width, xs[i], ys[i]);
            if (s.world.grass_ready[c]) {
                s.world.grass_ready[c] = 0;
                s.world.regrow[c] = cfg.regrow_delay;
                energy[i] += cfg.energy_gain_sheep;
                ++ev.grass_eaten;
            }
        }
    }

    // 2b. predation: per cell, the k-th wolf takes the k-th sheep, both in
    // ascending slot order
    {
        const std::size_t cells = s.world.cells();
        std::vector<std::int32_t> head(cells, -1), tail(cells, -1);
        std::vector<std::int32_t> next(static_cast<std::size_t>(s.sheep.capacity()), -1);
        auto s_act = s.sheep.active();
        auto sx = s.sheep.state().ints("x");
        auto sy = s.sheep.state().ints("y");
        for (std::size_t i = 0; i < s_act.size(); ++i) {
            if (!s_act[i])
                continue;
            const std::size_t c = cell_of(cfg.width, sx[i], sy[i]);
            const auto node = static_cast<std::int32_t>(i);
            if (head[c] < 0)
                head[c] = node;
            else
                next[static_cast<std::size_t>(tail[c])] = node;
            tail[c] = node;
        }

        auto w_act = s.wolves.active();
        auto wx = s.wolves.state().ints("x");
        auto wy = s.wolves.state().ints("y");
        auto w_energy = s.wolves.state_mut().reals("energy");
        auto s_energy = s.sheep.state().reals("energy");
        Mask eaten(s_act.size(), 0);
        for (std::size_t i = 0; i < w_act.size(); ++i) {
            if (!w_act[i])
                continue;
            const std::size_t c = cell_of(cfg.width, wx[i], wy[i]);
            const std::int32_t victim = head[c];
            if (victim < 0)
                continue;
            head[c] = next[static_cast<std::size_t>(victim)];
            eaten[static_cast<std::size_t>(victim)] = 1;
            ev.sheep.energy_removed_deaths += s_energy[static_cast<std::size_t>(victim)];
            ++ev.sheep.deaths;
            ++ev.sheep_eaten_by_wolves;
            w_energy[i] += cfg.energy_gain_wolf;
        }
        s.sheep = remove_agents(s.sheep, eaten);
    }

    // 3+4. metabolize, then starvation deaths
    metabolize(s.sheep, cfg.metabolism, ev.sheep);
    metabolize(s.wolves, cfg.metabolism, ev.wolves);
    s.sheep = die_if_starved(s.sheep, ev.sheep);
    s.wolves = die_if_starved(s.wolves, ev.wolves);

    // 5. reproduce
    const RngState rep_root = seed.split(StreamTag::PredReproduce).split(ut);
    s.sheep = reproduce(s.sheep, cfg, cfg.reproduce_prob_sheep, rep_root.split(0), 0, ev.sheep);
    s.wolves = reproduce(s.wolves, cfg, cfg.reproduce_prob_wolf, rep_root.split(1), 1, ev.wolves);

    // 6. regrow
    for (std::size_t c = 0; c < s.world.cells(); ++c) {
        if (s.world.regrow[c] > 0) {
            if (--s.world.regrow[c] == 0)
                s.world.grass_ready[c] = 1;
        }
    }

    if (events_out)
        *events_out = std::move(ev);
    return s;
}

PredationMetrics metrics_predation(const PredationWorld& world, const AgentSet& sheep,
                                   const AgentSet& wolves) {
    PredationMetrics m;
    m.n_sheep = sheep.num_active();
    m.n_wolves = wolves.num_active();
    m.n_grass = count_true({world.grass_ready.data(), world.grass_ready.size()});
    return m;
}

PredationModel::PredationModel(const PredationConfig& cfg, RngState seed)
    : cfg_(cfg), seed_(seed), state_(init_predation(cfg, seed)) {}

void PredationModel::step(std::int64_t t) {
    state_ = step_predation(state_, cfg_, seed_, t, &events_);
}

void PredationModel::collect_metrics(std::vector<std::vector<double>>& rows) const {
    const PredationMetrics m = metrics_predation(state_.world, state_.sheep, state_.wolves);
    rows.push_back({static_cast<double>(m.n_sheep), static_cast<double>(m.n_wolves),
                    static_cast<double>(m.n_grass),
                    static_cast<double>(events_.sheep.births_dropped +
                                        events_.wolves.births_dropped)});
}

ModelDescriptor PredationModel::descriptor(const PredationConfig& cfg) {
    return ModelDescriptor{
        "predation",
        {"n_sheep", "n_wolves", "n_grass", "births_dropped"},
        [cfg](Index, RngState seed) { return std::make_unique<PredationModel>(cfg, seed); },
    };
}

} // namespace abmx::models
