#pragma once

#include <map>
#include <string>
#include <vector>

#include "abmx/models/finance.hpp"
#include "abmx/models/predation.hpp"
#include "abmx/models/traffic.hpp"

namespace abmx {

// Resolved run configuration. The [run] section carries the harness keys;
// model sections ([predation], [traffic], [finance], [toy]) carry model
// parameters. Flags override file values, which override defaults.
struct RunConfig {
    std::string model = "predation";
    std::int64_t steps = 100;
    Index replicas = 1;
    std::uint64_t master_seed = 0;
    int threads = 0; // 0 = auto (ABMX_THREADS, then hardware)
    std::string out = "out";

    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& section, const std::string& key) const;
    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t dflt) const;
    double get_real(const std::string& section, const std::string& key, double dflt) const;
    std::string get_str(const std::string& section, const std::string& key,
                        std::string dflt) const;
    void set(const std::string& section, const std::string& key, std::string value);

    void validate() const; // throws ConfigError
};

// Sectioned key=value text; '#' and ';' start comments.
RunConfig parse_config_text(const std::string& text);

// Dispatches on extension: .json loads a run manifest, anything else is
// parsed as config text.
RunConfig load_config_file(const std::string& path);

models::PredationConfig predation_config(const RunConfig& cfg);
models::TrafficConfig traffic_config(const RunConfig& cfg);
models::FinanceConfig finance_config(const RunConfig& cfg);

std::vector<std::int64_t> parse_int_list(const std::string& text); // comma separated

// Agent schema declarations in config text. Each bundle is one key in a
// [schema] section holding a comma-separated field list; field order in the
// list is the declaration order used by the RNG schedule:
//
//   [schema]
//   state  = energy:real:const:5, x:int:uniform:0:100, ready:bool:const:false
//   params = rate:real:uniform:0:1
//
// Initializers: const:<value> or uniform:<lo>:<hi> (int and real kinds).
std::vector<FieldInit> parse_field_list(const std::string& text);
AgentSchema schema_from_config(const RunConfig& cfg, const std::string& section = "schema");

} // namespace abmx
