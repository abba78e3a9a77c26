#pragma once

#include "abmx/batch.hpp"
#include "abmx/lifecycle.hpp"

namespace abmx::models {

// Three-lane cellular-automaton road. Cars advance one column per step,
// optionally changing lane; each cell admits at most one car, conflicts are
// resolved by a fixed per-cell priority and acceptance is iterated to a
// fixed point so a blocked car blocks its followers. Exit from the last
// column is gated by a square-wave signal.
struct TrafficConfig {
    Index length = 100;       // cells per lane; lanes are fixed at 3
    std::int64_t period = 10; // signal period
    double green_fraction = 0.5;
};

inline constexpr Index kLanes = 3;

struct SignalSchedule {
    std::int64_t period = 10;
    std::int64_t green_len = 5;
    std::int64_t phase = 0;

    // phase = seed.split(TrafficSignal).uniform_int(0, 0, period)
    static SignalSchedule from_config(const TrafficConfig& cfg, RngState seed);
    bool green(std::int64_t t) const {
        return ((t + phase) % period + period) % period < green_len;
    }
};

struct Road {
    Index length = 0;
    AgentSet cars; // capacity 3 * length, state fields lane / cell
    std::vector<std::int32_t> occupancy; // flat lane*length+cell -> car slot or -1

    static Road empty(Index length);
    std::size_t cell_index(std::int64_t lane, std::int64_t cell) const {
        return static_cast<std::size_t>(lane) * static_cast<std::size_t>(length) +
               static_cast<std::size_t>(cell);
    }
    // Rebuilds occupancy from the car set; throws DomainError if two cars
    // share a cell.
    void rebuild_occupancy();
};

enum class MoveKind : std::uint8_t { Stay = 0, Move = 1, Exit = 2 };

struct Proposals {
    std::vector<MoveKind> kind;          // per car slot
    std::vector<std::int64_t> to_lane;   // valid when kind == Move
    std::vector<std::int64_t> to_cell;
};

// Stream schedule (within the replica seed):
//   signal phase: seed.split(TrafficSignal), uniform_int(0, 0, period)
//   proposals:    seed.split(TrafficPropose).split(t), draw(slot)
//   spawning:     seed.split(TrafficSpawn).split(t); k = uniform_int(0,0,4),
//                 then partial shuffle draws 1, 2
// Cars in the exit column propose Exit iff the signal is green, else Stay,
// without drawing; other cars draw uniform over their feasible targets in
// the order [forward, forward-left, forward-right].
Proposals propose_moves(const Road& road, RngState stream, bool signal_green);

// Deterministic acceptance. Per cell at most one incoming car wins, by
// priority same-lane > left-lane > right-lane (relative to the target);
// the winner enters only once the cell's occupant itself moves out.
Mask resolve_conflicts(const Road& road, const Proposals& proposals);

struct SpawnStats {
    Index spawned = 0;
};

Road spawn_cars(const Road& road, RngState stream, SpawnStats* stats = nullptr);

struct RoadStepStats {
    Index spawned = 0;
    Index exited = 0;
    bool signal_green = false;
};

Road step_road(const Road& road, const SignalSchedule& schedule, RngState seed,
               std::int64_t t, RoadStepStats* stats = nullptr);

class TrafficModel final : public Model {
public:
    TrafficModel(const TrafficConfig& cfg, RngState seed);

    void step(std::int64_t t) override;
    void collect_metrics(std::vector<std::vector<double>>& rows) const override;

    const Road& road() const { return road_; }
    const SignalSchedule& schedule() const { return schedule_; }
    std::int64_t spawned_total() const { return spawned_total_; }
    std::int64_t exited_total() const { return exited_total_; }

    static ModelDescriptor descriptor(const TrafficConfig& cfg);

private:
    RngState seed_;
    SignalSchedule schedule_;
    Road road_;
    RoadStepStats last_;
    std::int64_t spawned_total_ = 0;
    std::int64_t exited_total_ = 0;
};

} // namespace abmx::models
