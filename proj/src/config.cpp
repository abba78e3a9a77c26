#include "abmx/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace abmx {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::int64_t to_int(const std::string& v, const std::string& what) {
    try {
        std::size_t pos = 0;
        const std::int64_t x = std::stoll(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("expected an integer for " + what + ", got '" + v + "'");
    }
}

double to_real(const std::string& v, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("expected a number for " + what + ", got '" + v + "'");
    }
}

void apply_run_section(RunConfig& cfg) {
    if (cfg.has("run", "model"))
        cfg.model = cfg.get_str("run", "model", cfg.model);
    if (cfg.has("run", "steps"))
        cfg.steps = cfg.get_int("run", "steps", cfg.steps);
    if (cfg.has("run", "replicas"))
        cfg.replicas = static_cast<Index>(cfg.get_int("run", "replicas", cfg.replicas));
    if (cfg.has("run", "master_seed"))
        cfg.master_seed =
            static_cast<std::uint64_t>(cfg.get_int("run", "master_seed", 0));
    if (cfg.has("run", "threads"))
        cfg.threads = static_cast<int>(cfg.get_int("run", "threads", cfg.threads));
    if (cfg.has("run", "out"))
        cfg.out = cfg.get_str("run", "out", cfg.out);
}

} // namespace

bool RunConfig::has(const std::string& section, const std::string& key) const {
    const auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
}

std::int64_t RunConfig::get_int(const std::string& section, const std::string& key,
                                std::int64_t dflt) const {
    if (!has(section, key))
        return dflt;
    return to_int(sections.at(section).at(key), "[" + section + "] " + key);
}

double RunConfig::get_real(const std::string& section, const std::string& key,
                           double dflt) const {
    if (!has(section, key))
        return dflt;
    return to_real(sections.at(section).at(key), "[" + section + "] " + key);
}

std::string RunConfig::get_str(const std::string& section, const std::string& key,
                               std::string dflt) const {
    if (!has(section, key))
        return dflt;
    return sections.at(section).at(key);
}

void RunConfig::set(const std::string& section, const std::string& key, std::string value) {
    sections[section][key] = std::move(value);
}

void RunConfig::validate() const {
    if (steps < 1)
        throw ConfigError("steps must be >= 1");
    if (replicas < 1)
        throw ConfigError("replicas must be >= 1");
    if (model != "predation" && model != "traffic" && model != "finance" && model != "toy")
        throw ConfigError("unknown model '" + model + "'");
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section = "run";
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("bad section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("empty key at line " + std::to_string(lineno));
        cfg.sections[section][key] = value;
    }
    apply_run_section(cfg);
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();

    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(buf.str());
        } catch (const std::exception& e) {
            throw ConfigError(std::string("bad manifest JSON: ") + e.what());
        }
        RunConfig cfg;
        const auto& c = j.at("config");
        for (auto it = c.begin(); it != c.end(); ++it)
            for (auto kv = it.value().begin(); kv != it.value().end(); ++kv)
                cfg.sections[it.key()][kv.key()] = kv.value().get<std::string>();
        apply_run_section(cfg);
        return cfg;
    }
    return parse_config_text(buf.str());
}

models::PredationConfig predation_config(const RunConfig& cfg) {
    models::PredationConfig c;
    const std::string s = "predation";
    c.width = static_cast<Index>(cfg.get_int(s, "width", c.width));
    c.height = static_cast<Index>(cfg.get_int(s, "height", c.height));
    c.n_sheep0 = static_cast<Index>(cfg.get_int(s, "n_sheep", c.n_sheep0));
    c.n_wolves0 = static_cast<Index>(cfg.get_int(s, "n_wolves", c.n_wolves0));
    c.sheep_capacity = static_cast<Index>(cfg.get_int(s, "sheep_capacity", c.sheep_capacity));
    c.wolf_capacity = static_cast<Index>(cfg.get_int(s, "wolf_capacity", c.wolf_capacity));
    c.energy_gain_sheep = cfg.get_real(s, "energy_gain_sheep", c.energy_gain_sheep);
    c.energy_gain_wolf = cfg.get_real(s, "energy_gain_wolf", c.energy_gain_wolf);
    c.metabolism = cfg.get_real(s, "metabolism", c.metabolism);
    c.reproduce_prob_sheep = cfg.get_real(s, "reproduce_prob_sheep", c.reproduce_prob_sheep);
    c.reproduce_prob_wolf = cfg.get_real(s, "reproduce_prob_wolf", c.reproduce_prob_wolf);
    c.reproduce_energy_frac = cfg.get_real(s, "reproduce_energy_frac", c.reproduce_energy_frac);
    c.regrow_delay = cfg.get_int(s, "regrow_delay", c.regrow_delay);
    if (c.reproduce_prob_sheep < 0 || c.reproduce_prob_sheep > 1 ||
        c.reproduce_prob_wolf < 0 || c.reproduce_prob_wolf > 1)
        throw ConfigError("reproduce probabilities must lie in [0, 1]");
    if (c.n_sheep0 > c.sheep_capacity || c.n_wolves0 > c.wolf_capacity)
        throw ConfigError("initial counts exceed capacities");
    return c;
}

models::TrafficConfig traffic_config(const RunConfig& cfg) {
    models::TrafficConfig c;
    const std::string s = "traffic";
    c.length = static_cast<Index>(cfg.get_int(s, "length", c.length));
    c.period = cfg.get_int(s, "period", c.period);
    c.green_fraction = cfg.get_real(s, "green_fraction", c.green_fraction);
    if (c.length < 1)
        throw ConfigError("road length must be >= 1");
    if (c.period < 1)
        throw ConfigError("signal period must be >= 1");
    if (c.green_fraction < 0.0 || c.green_fraction > 1.0)
        throw ConfigError("green_fraction must lie in [0, 1]");
    return c;
}

models::FinanceConfig finance_config(const RunConfig& cfg) {
    models::FinanceConfig c;
    const std::string s = "finance";
    c.books = static_cast<Index>(cfg.get_int(s, "books", c.books));
    c.traders = static_cast<Index>(cfg.get_int(s, "traders", c.traders));
    c.book_capacity = static_cast<Index>(cfg.get_int(s, "book_capacity", c.book_capacity));
    c.p_order = cfg.get_real(s, "p_order", c.p_order);
    c.delta = cfg.get_real(s, "delta", c.delta);
    c.qmax = cfg.get_int(s, "qmax", c.qmax);
    c.max_order_age = cfg.get_int(s, "max_order_age", c.max_order_age);
    c.init_price = cfg.get_real(s, "init_price", c.init_price);
    if (c.books < 1 || c.traders < 0 || c.book_capacity < 1)
        throw ConfigError("finance: books/book_capacity must be >= 1, traders >= 0");
    if (c.p_order < 0.0 || c.p_order > 1.0)
        throw ConfigError("finance: p_order must lie in [0, 1]");
    if (c.qmax < 1)
        throw ConfigError("finance: qmax must be >= 1");
    return c;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, sep))
        out.push_back(trim(token));
    return out;
}

FieldInit parse_field_init(const std::string& decl) {
    const auto parts = split(decl, ':');
    if (parts.size() < 3)
        throw ConfigError("field declaration needs name:kind:init, got '" + decl + "'");
    const std::string& name = parts[0];
    const std::string& kind = parts[1];
    const std::string& init = parts[2];
    if (name.empty())
        throw ConfigError("empty field name in '" + decl + "'");

    const auto arg = [&](std::size_t i) -> const std::string& {
        if (parts.size() <= i)
            throw ConfigError("missing initializer argument in '" + decl + "'");
        return parts[i];
    };
    if (init == "const") {
        const std::string& v = arg(3);
        if (kind == "int")
            return FieldInit::const_int(name, to_int(v, decl));
        if (kind == "real")
            return FieldInit::const_real(name, to_real(v, decl));
        if (kind == "bool") {
            if (v == "true" || v == "1")
                return FieldInit::const_bool(name, true);
            if (v == "false" || v == "0")
                return FieldInit::const_bool(name, false);
            throw ConfigError("bool initializer must be true/false in '" + decl + "'");
        }
        throw ConfigError("unknown field kind '" + kind + "' in '" + decl + "'");
    }
    if (init == "uniform") {
        if (kind == "int")
            return FieldInit::uniform_int(name, to_int(arg(3), decl), to_int(arg(4), decl));
        if (kind == "real")
            return FieldInit::uniform_real(name, to_real(arg(3), decl), to_real(arg(4), decl));
        throw ConfigError("uniform initializer needs an int or real field in '" + decl + "'");
    }
    throw ConfigError("unknown initializer '" + init + "' in '" + decl + "'");
}

} // namespace

std::vector<FieldInit> parse_field_list(const std::string& text) {
    std::vector<FieldInit> out;
    for (const std::string& decl : split(text, ',')) {
        if (decl.empty())
            throw ConfigError("empty field declaration in '" + text + "'");
        out.push_back(parse_field_init(decl));
    }
    return out;
}

AgentSchema schema_from_config(const RunConfig& cfg, const std::string& section) {
    AgentSchema schema;
    if (cfg.has(section, "state"))
        schema.state = parse_field_list(cfg.get_str(section, "state", ""));
    if (cfg.has(section, "params"))
        schema.params = parse_field_list(cfg.get_str(section, "params", ""));
    if (cfg.has(section, "policy_state"))
        schema.policy_state = parse_field_list(cfg.get_str(section, "policy_state", ""));
    if (cfg.has(section, "policy_params"))
        schema.policy_params = parse_field_list(cfg.get_str(section, "policy_params", ""));
    return schema;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        token = trim(token);
        if (token.empty())
            throw ConfigError("empty entry in integer list '" + text + "'");
        out.push_back(to_int(token, "list entry"));
    }
    return out;
}

} // namespace abmx
