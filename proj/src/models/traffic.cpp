#include "abmx/models/traffic.hpp"

#include <algorithm>
#include <cmath>

namespace abmx::models {

SignalSchedule SignalSchedule::from_config(const TrafficConfig& cfg, RngState seed) {
    if (cfg.period < 1)
        throw DomainError("signal period must be >= 1");
    SignalSchedule s;
    s.period = cfg.period;
    s.green_len = std::clamp<std::int64_t>(
        std::llround(static_cast<double>(cfg.period) * cfg.green_fraction), 0, cfg.period);
    s.phase = seed.split(StreamTag::TrafficSignal).uniform_int(0, 0, cfg.period);
    return s;
}

Road Road::empty(Index length) {
    if (length < 1)
        throw DomainError("road length must be >= 1");
    const auto capacity = static_cast<Index>(kLanes * length);
    const auto n = static_cast<std::size_t>(capacity);
    FieldBundle state(n);
    state.add("lane", Column::ints(n));
    state.add("cell", Column::ints(n));
    Road r{length, AgentSet(capacity, std::move(state), FieldBundle(n)), {}};
    r.occupancy.assign(n, -1);
    return r;
}

void Road::rebuild_occupancy() {
    std::fill(occupancy.begin(), occupancy.end(), -1);
    auto act = cars.active();
    auto lanes = cars.state().ints("lane");
    auto cells = cars.state().ints("cell");
    for (std::size_t i = 0; i < act.size(); ++i) {
        if (!act[i])
            continue;
        const std::size_t c = cell_index(lanes[i], cells[i]);
        if (occupancy[c] != -1)
            throw DomainError("two cars occupy one road cell");
        occupancy[c] = static_cast<std::int32_t>(i);
    }
}

Proposals propose_moves(const Road& road, RngState stream, bool signal_green) {
    const auto n = static_cast<std::size_t>(road.cars.capacity());
    Proposals p;
    p.kind.assign(n, MoveKind::Stay);
    p.to_lane.assign(n, 0);
    p.to_cell.assign(n, 0);

    auto act = road.cars.active();
    auto lanes = road.cars.state().ints("lane");
    auto cells = road.cars.state().ints("cell");
    for (std::size_t i = 0; i < n; ++i) {
        if (!act[i])
            continue;
        const std::int64_t lane = lanes[i];
        const std::int64_t cell = cells[i];
        if (cell == road.length - 1) {
            p.kind[i] = signal_green ? MoveKind::Exit : MoveKind::Stay;
            continue;
        }
        // feasible targets in fixed order: forward, forward-left, forward-right
        std::int64_t options[3];
        int n_options = 0;
        options[n_options++] = lane;
        if (lane > 0)
            options[n_options++] = lane - 1;
        if (lane < kLanes - 1)
            options[n_options++] = lane + 1;
        const auto pick = stream.uniform_int(i, 0, n_options);
        p.kind[i] = MoveKind::Move;
        p.to_lane[i] = options[pick];
        p.to_cell[i] = cell + 1;
    }
    return p;
}

Mask resolve_conflicts(const Road& road, const Proposals& proposals) {
    const auto n = static_cast<std::size_t>(road.cars.capacity());
    if (proposals.kind.size() != n)
        throw ContractError("proposal vector length mismatch");
    auto act = road.cars.active();

    Mask accepted(n, 0);

    // winner per target cell: priority same-lane > left-lane > right-lane
    const std::size_t cells = road.occupancy.size();
    std::vector<std::int32_t> winner(cells, -1);
    std::vector<int> winner_prio(cells, 99);
    auto lanes = road.cars.state().ints("lane");
    for (std::size_t i = 0; i < n; ++i) {
        if (!act[i])
            continue;
        switch (proposals.kind[i]) {
        case MoveKind::Stay:
            break;
        case MoveKind::Exit:
            accepted[i] = 1; // the exit pseudo-cell has no capacity limit
            break;
        case MoveKind::Move: {
            const std::int64_t tl = proposals.to_lane[i];
            const std::int64_t tc = proposals.to_cell[i];
            if (tl < 0 || tl >= kLanes || tc < 0 || tc >= road.length)
                throw ContractError("move proposal targets a cell outside the road");
            const std::size_t target = road.cell_index(tl, tc);
            int prio;
            if (lanes[i] == tl)
                prio = 0; // same lane behind
            else if (lanes[i] == tl - 1)
                prio = 1; // from the target's left lane
            else
                prio = 2; // from the target's right lane
            if (prio < winner_prio[target]) {
                winner_prio[target] = prio;
                winner[target] = static_cast<std::int32_t>(i);
            }
            break;
        }
        }
    }

    // Iterate acceptance to a fixed point: a winner enters once its target
    // is empty or its occupant's own proposal has been accepted.
    for (Index round = 0; round < road.length; ++round) {
        bool changed = false;
        for (std::size_t c = 0; c < cells; ++c) {
            const std::int32_t w = winner[c];
            if (w < 0 || accepted[static_cast<std::size_t>(w)])
                continue;
            const std::int32_t occ = road.occupancy[c];
            if (occ < 0 || accepted[static_cast<std::size_t>(occ)]) {
                accepted[static_cast<std::size_t>(w)] = 1;
                changed = true;
            }
        }
        if (!changed)
            break;
    }
    return accepted;
}

Road spawn_cars(const Road& road, RngState stream, SpawnStats* stats) {
    const auto k = stream.uniform_int(0, 0, 4); // cars attempted this step

    // partial shuffle of the three entry lanes; picked order = row order
    std::int64_t lanes[kLanes] = {0, 1, 2};
    for (std::int64_t i = 0; i < std::min<std::int64_t>(k, kLanes - 1); ++i) {
        const auto j = i + stream.uniform_int(static_cast<std::uint64_t>(1 + i), 0, kLanes - i);
        std::swap(lanes[i], lanes[j]);
    }

    FieldBundle vals(static_cast<std::size_t>(kLanes));
    vals.add("lane", Column::ints(kLanes));
    vals.add("cell", Column::ints(kLanes));
    Mask valid(static_cast<std::size_t>(kLanes), 0);
    auto vl = vals.ints("lane");
    for (std::int64_t r = 0; r < std::min<std::int64_t>(k, kLanes); ++r) {
        const std::int64_t lane = lanes[r];
        if (road.occupancy[road.cell_index(lane, 0)] != -1)
            continue; // occupied entry cells cannot spawn
        vl[static_cast<std::size_t>(r)] = lane;
        valid[static_cast<std::size_t>(r)] = 1;
    }

    UpdateBatch rows(std::move(vals), std::move(valid));
    const ApplyFn place = [](StateWriter& w, const SlotView&, const RowView& row, Index) {
        w.set_int("lane", row.get_int("lane"));
        w.set_int("cell", row.get_int("cell"));
    };
    SpawnOutcome o = spawn_agents(road.cars, rows, place);

    Road out = road;
    out.cars = std::move(o.set);
    out.rebuild_occupancy();
    if (stats)
        stats->spawned = o.spawned;
    return out;
}

Road step_road(const Road& road, const SignalSchedule& schedule, RngState seed,
               std::int64_t t, RoadStepStats* stats) {
    const bool green = schedule.green(t);
    const auto ut = static_cast<std::uint64_t>(t);

    const Proposals proposals =
        propose_moves(road, seed.split(StreamTag::TrafficPropose).split(ut), green);
    const Mask accepted = resolve_conflicts(road, proposals);

    const auto n = static_cast<std::size_t>(road.cars.capacity());
    Mask moved(n, 0), exited(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!accepted[i])
            continue;
        if (proposals.kind[i] == MoveKind::Move)
            moved[i] = 1;
        else if (proposals.kind[i] == MoveKind::Exit)
            exited[i] = 1;
    }

    Road out = road;
    out.cars = set_agents_mask(out.cars, moved, [&](StateWriter& w, const SlotView& v) {
        const auto i = static_cast<std::size_t>(v.slot());
        w.set_int("lane", proposals.to_lane[i]);
        w.set_int("cell", proposals.to_cell[i]);
    });
    out.cars = remove_agents(out.cars, exited);
    out.rebuild_occupancy();

    SpawnStats spawn_stats;
    out = spawn_cars(out, seed.split(StreamTag::TrafficSpawn).split(ut), &spawn_stats);

    if (stats) {
        stats->spawned = spawn_stats.spawned;
        stats->exited = count_true(exited);
        stats->signal_green = green;
    }
    return out;
}

TrafficModel::TrafficModel(const TrafficConfig& cfg, RngState seed)
    : seed_(seed), schedule_(SignalSchedule::from_config(cfg, seed)),
      road_(Road::empty(cfg.length)) {}

void TrafficModel::step(std::int64_t t) {
    road_ = step_road(road_, schedule_, seed_, t, &last_);
    spawned_total_ += last_.spawned;
    exited_total_ += last_.exited;
}

void TrafficModel::collect_metrics(std::vector<std::vector<double>>& rows) const {
    rows.push_back({static_cast<double>(road_.cars.num_active()),
                    static_cast<double>(last_.spawned), static_cast<double>(last_.exited),
                    last_.signal_green ? 1.0 : 0.0});
}

ModelDescriptor TrafficModel::descriptor(const TrafficConfig& cfg) {
    return ModelDescriptor{
        "traffic",
        {"n_cars", "spawned", "exited", "signal_green"},
        [cfg](Index, RngState seed) { return std::make_unique<TrafficModel>(cfg, seed); },
    };
}

} // namespace abmx::models
