#pragma once

#include "abmx/batch.hpp"
#include "abmx/lifecycle.hpp"

namespace abmx::models {

// Grass / sheep / wolf lattice. Animals move to a random 8-neighbor cell
// (toroidal wrap), sheep graze, wolves take one sheep sharing their cell,
// everyone pays metabolism, the starved die, survivors reproduce with a
// fixed probability and offspring land on the parent cell through the
// rank-match spawn path.
struct PredationConfig {
    Index width = 100;
    Index height = 100;
    Index n_sheep0 = 600;
    Index n_wolves0 = 400;
    Index sheep_capacity = 20000;
    Index wolf_capacity = 20000;
    double energy_gain_sheep = 4.0;
    double energy_gain_wolf = 20.0;
    double metabolism = 1.0;
    double reproduce_prob_sheep = 0.04;
    double reproduce_prob_wolf = 0.05;
    double reproduce_energy_frac = 0.5;
    std::int64_t regrow_delay = 30;
};

struct PredationWorld {
    Index width = 0;
    Index height = 0;
    Mask grass_ready;                    // length width*height
    std::vector<std::int64_t> regrow;    // steps until regrowth; 0 <=> grass_ready

    static PredationWorld full_grass(Index width, Index height);
    std::size_t cells() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
};

// Per-step event counters. Energies live on a fixed dyadic grid (see
// kEnergyGranule), so the ledger below balances exactly in doubles:
//   delta(total energy) == eats * gain - metabolized * metabolism
//                          - energy_removed_deaths - energy_dropped_births
struct SpeciesEvents {
    std::int64_t metabolized = 0;
    std::int64_t deaths = 0;
    double energy_removed_deaths = 0.0;
    std::int64_t births = 0;
    std::int64_t births_dropped = 0;
    double energy_dropped_births = 0.0;
    std::vector<std::pair<Index, Index>> birth_pairs; // (parent slot, child slot)
};

struct PredationEvents {
    std::int64_t grass_eaten = 0;
    std::int64_t sheep_eaten_by_wolves = 0;
    SpeciesEvents sheep;
    SpeciesEvents wolves;
};

// All energy values are multiples of this granule; offspring transfers are
// floored onto the grid so parent - child is exact.
inline constexpr double kEnergyGranule = 0x1p-20;
double quantize_energy(double x);

struct PredationState {
    PredationWorld world;
    AgentSet sheep;
    AgentSet wolves;
};

// Stream schedule (within the replica seed):
//   sheep create seed  = seed.split(20), wolf create seed = seed.split(21)
//   move:      seed.split(PredMove).split(t).split(species)       draw(slot)
//   reproduce: seed.split(PredReproduce).split(t).split(species)  draw(slot)
// with species 0 = sheep, 1 = wolves.
PredationState init_predation(const PredationConfig& cfg, RngState seed);

PredationState step_predation(const PredationState& in, const PredationConfig& cfg,
                              RngState seed, std::int64_t t, PredationEvents* events = nullptr);

struct PredationMetrics {
    std::int64_t n_sheep = 0;
    std::int64_t n_wolves = 0;
    std::int64_t n_grass = 0;
};

PredationMetrics metrics_predation(const PredationWorld& world, const AgentSet& sheep,
                                   const AgentSet& wolves);

class PredationModel final : public Model {
public:
    PredationModel(const PredationConfig& cfg, RngState seed);

    void step(std::int64_t t) override;
    void collect_metrics(std::vector<std::vector<double>>& rows) const override;

    const PredationState& state() const { return state_; }
    const PredationEvents& last_events() const { return events_; }

    static ModelDescriptor descriptor(const PredationConfig& cfg);

private:
    PredationConfig cfg_;
    RngState seed_;
    PredationState state_;
    PredationEvents events_;
};

} // namespace abmx::models
