#include "abmx/batch.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include "abmx/errors.hpp"

namespace abmx {

std::vector<ReplicaConfig> replica_seeds(RngState master, Index count) {
    const RngState root = master.split(StreamTag::BatchReplica);
    std::vector<ReplicaConfig> out;
    out.reserve(static_cast<std::size_t>(count));
    for (Index r = 0; r < count; ++r)
        out.push_back({root.split(static_cast<std::uint64_t>(r))});
    return out;
}

Trajectory run_batch(const ModelDescriptor& model, const std::vector<ReplicaConfig>& replicas,
                     std::int64_t steps, int threads, double* wall_ms) {
    if (replicas.empty())
        throw BatchError("batch needs at least one replica");
    if (steps < 1)
        throw DomainError("steps must be >= 1");

    const auto t0 = std::chrono::steady_clock::now();

    const auto n_replicas = static_cast<Index>(replicas.size());
    std::vector<std::vector<Trajectory::Row>> per_replica(replicas.size());
    std::atomic<Index> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    auto worker = [&]() {
        std::vector<std::vector<double>> scratch;
        for (;;) {
            const Index r = next.fetch_add(1);
            if (r >= n_replicas || failed.load())
                break;
            try {
                auto m = model.make(r, replicas[static_cast<std::size_t>(r)].seed);
                auto& rows = per_replica[static_cast<std::size_t>(r)];
                for (std::int64_t t = 1; t <= steps; ++t) {
                    m->step(t);
                    scratch.clear();
                    m->collect_metrics(scratch);
                    for (auto& vals : scratch) {
                        if (vals.size() != model.metric_columns.size())
                            throw BatchError("model '" + model.name +
                                             "' emitted a metric row of the wrong width");
                        rows.push_back({r, t, std::move(vals)});
                    }
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true))
                    error_message = e.what();
                break;
            }
        }
    };

    int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1)
        n_threads = 1;
    if (n_threads > static_cast<int>(replicas.size()))
        n_threads = static_cast<int>(replicas.size());

    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    if (failed.load())
        throw BatchError(error_message.empty() ? "replica failed" : error_message);

    Trajectory out;
    out.columns.reserve(model.metric_columns.size() + 2);
    out.columns.emplace_back("step");
    out.columns.emplace_back("replica");
    for (const auto& c : model.metric_columns)
        out.columns.push_back(c);
    for (auto& rows : per_replica)
        for (auto& row : rows)
            out.rows.push_back(std::move(row));

    if (wall_ms) {
        const auto t1 = std::chrono::steady_clock::now();
        *wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    return out;
}

} // namespace abmx
