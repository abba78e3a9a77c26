#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "abmx/column.hpp"
#include "abmx/rng.hpp"

namespace abmx {

// One replica of a simulation. step(t) must be a deterministic function of
// the construction arguments and t; replicas share nothing mutable.
class Model {
public:
    virtual ~Model() = default;
    virtual void step(std::int64_t t) = 0;
    // One or more metric rows for the current state, each matching the
    // descriptor's metric_columns.
    virtual void collect_metrics(std::vector<std::vector<double>>& rows) const = 0;
};

struct ModelDescriptor {
    std::string name;
    std::vector<std::string> metric_columns; // excluding step / replica
    std::function<std::unique_ptr<Model>(Index replica, RngState seed)> make;
};

struct ReplicaConfig {
    RngState seed;
};

// Per-replica, per-step metric rows, ordered by (replica, step) regardless
// of execution interleaving.
struct Trajectory {
    std::vector<std::string> columns; // "step", "replica", then metrics

    struct Row {
        Index replica;
        std::int64_t step;
        std::vector<double> values;
    };
    std::vector<Row> rows;
};

// Runs every replica for `steps` steps. Replicas execute on up to `threads`
// worker threads (0 = hardware concurrency); the result is bitwise
// independent of the thread count. Seeds for the ladder helper below come
// from master.split(StreamTag::BatchReplica).split(replica).
Trajectory run_batch(const ModelDescriptor& model, const std::vector<ReplicaConfig>& replicas,
                     std::int64_t steps, int threads, double* wall_ms = nullptr);

std::vector<ReplicaConfig> replica_seeds(RngState master, Index count);

} // namespace abmx
