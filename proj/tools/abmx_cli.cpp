// abmx command-line harness: run single or batched simulations, produce
// deterministic CSV/JSON artifacts, and time replica ladders.
//
// Exit codes: 0 ok, 2 configuration error, 3 runtime error.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "abmx/bench.hpp"
#include "abmx/config.hpp"
#include "abmx/csv.hpp"
#include "abmx/toy.hpp"
#include "abmx/version.hpp"

namespace {

using namespace abmx;

struct CommonFlags {
    std::string config_path;
    std::string model;
    std::int64_t steps = -1;
    std::int64_t replicas = -1;
    std::int64_t master_seed = -1;
    int threads = -1;
    std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "config file (key=value sections, or a run manifest .json)");
    cmd->add_option("--model", f.model, "model: predation | traffic | finance | toy");
    cmd->add_option("--steps", f.steps, "steps per replica");
    cmd->add_option("--replicas", f.replicas, "number of replicas");
    cmd->add_option("--master-seed", f.master_seed, "master seed");
    cmd->add_option("--threads", f.threads, "worker threads (default: ABMX_THREADS, then hardware)");
    cmd->add_option("--out", f.out, "output path prefix");
}

int env_threads() {
    if (const char* env = std::getenv("ABMX_THREADS")) {
        try {
            return std::max(0, std::stoi(env));
        } catch (const std::exception&) {
            throw ConfigError("ABMX_THREADS is not an integer");
        }
    }
    return 0;
}

RunConfig resolve_config(const CommonFlags& f) {
    RunConfig cfg;
    if (!f.config_path.empty())
        cfg = load_config_file(f.config_path);
    if (!f.model.empty())
        cfg.model = f.model;
    if (f.steps >= 0)
        cfg.steps = f.steps;
    if (f.replicas >= 0)
        cfg.replicas = static_cast<Index>(f.replicas);
    if (f.master_seed >= 0)
        cfg.master_seed = static_cast<std::uint64_t>(f.master_seed);
    if (f.threads >= 0)
        cfg.threads = f.threads;
    else if (cfg.threads == 0)
        cfg.threads = env_threads();
    if (!f.out.empty())
        cfg.out = f.out;
    cfg.validate();
    return cfg;
}

ModelDescriptor descriptor_for(const RunConfig& cfg) {
    if (cfg.model == "predation")
        return models::PredationModel::descriptor(predation_config(cfg));
    if (cfg.model == "traffic")
        return models::TrafficModel::descriptor(traffic_config(cfg));
    if (cfg.model == "finance")
        return models::FinanceModel::descriptor(finance_config(cfg));
    throw ConfigError("model '" + cfg.model + "' cannot run as a batch");
}

nlohmann::json config_json(const RunConfig& cfg) {
    nlohmann::json sections(nlohmann::json::value_t::object);
    for (const auto& [name, kv] : cfg.sections) {
        nlohmann::json sec(nlohmann::json::value_t::object);
        for (const auto& [k, v] : kv)
            sec[k] = v;
        sections[name] = sec;
    }
    // resolved harness keys, so the manifest alone reproduces the run
    sections["run"]["model"] = cfg.model;
    sections["run"]["steps"] = std::to_string(cfg.steps);
    sections["run"]["replicas"] = std::to_string(cfg.replicas);
    sections["run"]["master_seed"] = std::to_string(cfg.master_seed);
    sections["run"]["threads"] = std::to_string(cfg.threads);
    sections["run"]["out"] = cfg.out;
    return sections;
}

void write_manifest(const RunConfig& cfg) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["model"] = cfg.model;
    j["steps"] = cfg.steps;
    j["replicas"] = cfg.replicas;
    j["master_seed"] = cfg.master_seed;
    j["threads"] = cfg.threads;
    j["out"] = cfg.out;
    nlohmann::json seeds(nlohmann::json::value_t::array);
    for (const auto& rc : replica_seeds(RngState{cfg.master_seed}, cfg.replicas))
        seeds.push_back(rc.seed.key);
    j["replica_seeds"] = seeds;
    j["config"] = config_json(cfg);
    write_file_atomic(cfg.out + ".manifest.json", j.dump(2) + "\n");
}

int run_toy_command(const std::string& a_text, const std::string& b_text) {
    if (a_text.empty() || b_text.empty())
        throw ConfigError("toy task needs --a and --b integer lists");
    const auto a = parse_int_list(a_text);
    const auto b = parse_int_list(b_text);
    const ToyResult r = run_toy(a, b);
    std::cout << "a  = " << format_int_list(a) << "\n";
    std::cout << "b  = " << format_int_list(b) << "\n";
    std::cout << "a' (rank-match)         = " << format_int_list(r.rank_match) << "\n";
    std::cout << "a' (sort-count-iterate) = " << format_int_list(r.sort_count_iterate) << "\n";
    if (r.rank_match != r.sort_count_iterate)
        throw Error("kernel disagreement on the toy task");
    return 0;
}

int run_command(const CommonFlags& flags, const std::string& a_text, const std::string& b_text,
                std::int64_t books, std::int64_t traders) {
    RunConfig cfg;
    {
        CommonFlags f = flags;
        cfg = resolve_config(f);
    }
    if (books >= 0)
        cfg.set("finance", "books", std::to_string(books));
    if (traders >= 0)
        cfg.set("finance", "traders", std::to_string(traders));

    if (cfg.model == "toy") {
        std::string a = a_text.empty() ? cfg.get_str("toy", "a", "") : a_text;
        std::string b = b_text.empty() ? cfg.get_str("toy", "b", "") : b_text;
        return run_toy_command(a, b);
    }

    const ModelDescriptor model = descriptor_for(cfg);
    const auto seeds = replica_seeds(RngState{cfg.master_seed}, cfg.replicas);
    double wall_ms = 0.0;
    const Trajectory traj = run_batch(model, seeds, cfg.steps, cfg.threads, &wall_ms);

    const std::string csv_path = cfg.out + ".csv";
    try {
        write_file_atomic(csv_path, trajectory_to_csv(traj));
        write_manifest(cfg);
    } catch (...) {
        std::remove(csv_path.c_str());
        throw;
    }
    std::cout << "model=" << cfg.model << " replicas=" << cfg.replicas
              << " steps=" << cfg.steps << " rows=" << traj.rows.size()
              << " wall_ms=" << format_real(wall_ms) << "\n"
              << "wrote " << csv_path << " and " << cfg.out << ".manifest.json\n";
    return 0;
}

int bench_command(const CommonFlags& flags, const std::string& ladder_text,
                  std::int64_t runs, std::int64_t warmup) {
    RunConfig cfg = resolve_config(flags);
    if (cfg.model == "toy")
        throw ConfigError("bench needs a simulation model");

    std::vector<Index> ladder;
    for (const std::int64_t v : parse_int_list(ladder_text)) {
        if (v < 1)
            throw ConfigError("ladder entries must be >= 1");
        ladder.push_back(static_cast<Index>(v));
    }

    const ModelDescriptor model = descriptor_for(cfg);
    const BenchReport report = run_bench(model, ladder, cfg.steps, runs, warmup,
                                         RngState{cfg.master_seed}, cfg.threads);

    nlohmann::json j;
    j["version"] = kVersion;
    j["model"] = report.model;
    j["steps"] = report.steps;
    j["runs"] = report.runs;
    j["warmup_steps"] = report.warmup_steps;
    nlohmann::json rows(nlohmann::json::value_t::array);
    for (const auto& row : report.rows) {
        nlohmann::json r;
        r["model"] = row.model;
        r["replicas"] = row.replicas;
        r["steps"] = row.steps;
        r["wall_ms_median"] = row.wall_ms_median;
        r["wall_ms_iqr"] = row.wall_ms_iqr;
        r["warmup_steps_excluded"] = row.warmup_steps_excluded;
        r["main_runs_ms"] = row.main_runs_ms;
        r["warmup_runs_ms"] = row.warmup_runs_ms;
        rows.push_back(r);
    }
    j["rows"] = rows;
    write_file_atomic(cfg.out + ".bench.json", j.dump(2) + "\n");

    std::cout << bench_table(report);
    std::cout << "wrote " << cfg.out << ".bench.json\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"abmx: fixed-shape agent-based simulation harness"};
    app.set_version_flag("--version", abmx::kVersion);
    app.require_subcommand(1);

    CommonFlags run_flags, bench_flags;
    std::string toy_a, toy_b, run_a, run_b, ladder = "10,20,50,100,200,500";
    std::int64_t books = -1, traders = -1, runs = 10, warmup = 5;

    CLI::App* run_cmd = app.add_subcommand("run", "run a model and write CSV + manifest");
    add_common(run_cmd, run_flags);
    run_cmd->add_option("--a", run_a, "toy model: source integer list");
    run_cmd->add_option("--b", run_b, "toy model: update integer list");
    run_cmd->add_option("--books", books, "finance: number of order books");
    run_cmd->add_option("--traders", traders, "finance: number of traders");

    CLI::App* bench_cmd = app.add_subcommand("bench", "time a replica ladder");
    add_common(bench_cmd, bench_flags);
    bench_cmd->add_option("--ladder", ladder, "replica counts, comma separated");
    bench_cmd->add_option("--runs", runs, "timed runs per rung (>= 5)");
    bench_cmd->add_option("--warmup", warmup, "warmup steps excluded by subtraction");

    CLI::App* toy_cmd = app.add_subcommand("toy", "even/odd pairing task through both kernels");
    toy_cmd->add_option("--a", toy_a, "source integer list")->required();
    toy_cmd->add_option("--b", toy_b, "update integer list")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed())
            return run_command(run_flags, run_a, run_b, books, traders);
        if (bench_cmd->parsed())
            return bench_command(bench_flags, ladder, runs, warmup);
        if (toy_cmd->parsed())
            return run_toy_command(toy_a, toy_b);
        return 2;
    } catch (const abmx::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
