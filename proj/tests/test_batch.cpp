#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include "abmx/batch.hpp"
#include "abmx/models/predation.hpp"
#include "abmx/models/traffic.hpp"
#include "support/oracle.hpp"

using namespace abmx;

namespace {

// deliberately small predation setup for fast batches
models::PredationConfig small_predation() {
    models::PredationConfig c;
    c.width = 16;
    c.height = 16;
    c.n_sheep0 = 30;
    c.n_wolves0 = 15;
    c.sheep_capacity = 600;
    c.wolf_capacity = 600;
    return c;
}

bool rows_bitwise_equal(const Trajectory& a, const Trajectory& b) {
    if (a.columns != b.columns || a.rows.size() != b.rows.size())
        return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& ra = a.rows[i];
        const auto& rb = b.rows[i];
        if (ra.replica != rb.replica || ra.step != rb.step || ra.values.size() != rb.values.size())
            return false;
        if (std::memcmp(ra.values.data(), rb.values.data(),
                        ra.values.size() * sizeof(double)) != 0)
            return false;
    }
    return true;
}

Trajectory solo_runs(const ModelDescriptor& model, const std::vector<ReplicaConfig>& seeds,
                     std::int64_t steps) {
    // independent of run_batch: construct and step each model directly
    Trajectory t;
    t.columns = {"step", "replica"};
    for (const auto& c : model.metric_columns)
        t.columns.push_back(c);
    for (std::size_t r = 0; r < seeds.size(); ++r) {
        auto m = model.make(static_cast<Index>(r), seeds[r].seed);
        for (std::int64_t step = 1; step <= steps; ++step) {
            m->step(step);
            std::vector<std::vector<double>> rows;
            m->collect_metrics(rows);
            for (auto& vals : rows)
                t.rows.push_back({static_cast<Index>(r), step, std::move(vals)});
        }
    }
    return t;
}

} // namespace

TEST_CASE("K=1 batch equals a single run") {
    const auto model = models::PredationModel::descriptor(small_predation());
    const auto seeds = replica_seeds(RngState{7}, 1);
    const Trajectory batch = run_batch(model, seeds, 10, 1);
    const Trajectory solo = solo_runs(model, seeds, 10);
    CHECK(rows_bitwise_equal(batch, solo));
}

TEST_CASE("batched replicas match solo runs bitwise") {
    const auto model = models::PredationModel::descriptor(small_predation());
    const auto seeds = replica_seeds(RngState{3}, 10);
    const Trajectory solo = solo_runs(model, seeds, 15);
    for (const int threads : {1, 2, 4}) {
        const Trajectory batch = run_batch(model, seeds, 15, threads);
        REQUIRE(rows_bitwise_equal(batch, solo));
    }
}

TEST_CASE("thread count does not change traffic trajectories either") {
    models::TrafficConfig cfg;
    cfg.length = 20;
    const auto model = models::TrafficModel::descriptor(cfg);
    const auto seeds = replica_seeds(RngState{11}, 8);
    const Trajectory one = run_batch(model, seeds, 50, 1);
    const Trajectory many = run_batch(model, seeds, 50, 4);
    CHECK(rows_bitwise_equal(one, many));
}

TEST_CASE("replica seeds are distinct and documented") {
    const auto seeds = replica_seeds(RngState{5}, 16);
    const abmx_test::ReplayRng root =
        abmx_test::ReplayRng{5}.split(static_cast<std::uint64_t>(StreamTag::BatchReplica));
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        CHECK(seeds[i].seed.key == root.split(i).key);
        for (std::size_t j = i + 1; j < seeds.size(); ++j)
            CHECK(seeds[i].seed.key != seeds[j].seed.key);
    }
}

TEST_CASE("empty replica list and malformed metric rows are batch errors") {
    const auto model = models::PredationModel::descriptor(small_predation());
    CHECK_THROWS_AS(run_batch(model, {}, 5, 1), BatchError);

    ModelDescriptor broken = model;
    broken.metric_columns = {"only_one"};
    CHECK_THROWS_AS(run_batch(broken, replica_seeds(RngState{0}, 2), 3, 2), BatchError);
}

TEST_CASE("trajectory row ordering is (replica, step)") {
    const auto model = models::PredationModel::descriptor(small_predation());
    const Trajectory t = run_batch(model, replica_seeds(RngState{9}, 4), 6, 4);
    REQUIRE(t.rows.size() == 4 * 6);
    std::size_t k = 0;
    for (Index r = 0; r < 4; ++r)
        for (std::int64_t step = 1; step <= 6; ++step, ++k) {
            CHECK(t.rows[k].replica == r);
            CHECK(t.rows[k].step == step);
        }
}
