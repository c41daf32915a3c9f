#include "stokesim/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "stokesim/errors.hpp"

namespace stokesim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw ConfigError("config." + key + ": " + what);
}

double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
}

double as_positive(const json& v, const std::string& key) {
    const double x = as_number(v, key);
    if (!(x > 0.0)) fail(key, "must be positive");
    return x;
}

int as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<int>();
}

uint64_t as_seed(const json& v, const std::string& key) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0))
        fail(key, "expected a nonnegative integer");
    return v.get<uint64_t>();
}

bool as_bool(const json& v, const std::string& key) {
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& key) {
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "scenario",        "n_markers",        "epsilon",
        "stiffness",       "shear_rate",       "tether_stiffness",
        "r_connect",       "box_size",         "gravity",
        "scenario_seed",   "dt",               "t_final",
        "order",           "tableau_file",     "mode",
        "quad_nodes",      "seed",             "seeds",
        "terminal",        "correlation_length", "adjoint_refine",
        "reg_error_self_term", "snapshot_times", "out_dir",
    };
    return keys;
}

} // namespace

RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    // a manifest wraps the original configuration under "config"
    if (j.contains("config")) {
        if (!j.at("config").is_object())
            throw ConfigError("config.config: expected a JSON object");
        return parse_config(j.at("config"));
    }

    for (auto it = j.begin(); it != j.end(); ++it) {
        if (known_keys().count(it.key()) == 0)
            fail(it.key(), "unknown key");
    }

    RunConfig cfg;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        if (key == "scenario") {
            cfg.scenario.kind = scenario_by_name(as_string(v, key));
        } else if (key == "n_markers") {
            cfg.scenario.n_markers = as_int(v, key);
            if (cfg.scenario.n_markers < 2) fail(key, "must be at least 2");
        } else if (key == "epsilon") {
            cfg.scenario.epsilon = as_positive(v, key);
        } else if (key == "stiffness") {
            cfg.scenario.stiffness = as_positive(v, key);
        } else if (key == "shear_rate") {
            cfg.scenario.shear_rate = as_number(v, key);
        } else if (key == "tether_stiffness") {
            cfg.scenario.tether_stiffness = as_number(v, key);
            if (cfg.scenario.tether_stiffness < 0.0) fail(key, "must be nonnegative");
        } else if (key == "r_connect") {
            cfg.scenario.r_connect = as_positive(v, key);
        } else if (key == "box_size") {
            cfg.scenario.box_size = as_positive(v, key);
        } else if (key == "gravity") {
            cfg.scenario.gravity = as_number(v, key);
        } else if (key == "scenario_seed") {
            cfg.scenario.seed = as_seed(v, key);
        } else if (key == "dt") {
            cfg.dt = as_positive(v, key);
        } else if (key == "t_final") {
            cfg.t_final = as_positive(v, key);
        } else if (key == "order") {
            cfg.order = as_string(v, key);
        } else if (key == "tableau_file") {
            cfg.tableau_file = as_string(v, key);
        } else if (key == "mode") {
            const std::string s = as_string(v, key);
            if (s == "regularized_exact") cfg.mode = Mode::regularized_exact;
            else if (s == "singular_target") cfg.mode = Mode::singular_target;
            else fail(key, "expected 'regularized_exact' or 'singular_target'");
        } else if (key == "quad_nodes") {
            cfg.quad_nodes = as_int(v, key);
            if (cfg.quad_nodes < 1) fail(key, "must be at least 1");
        } else if (key == "seed") {
            cfg.seed = as_seed(v, key);
        } else if (key == "seeds") {
            if (!v.is_array() || v.empty()) fail(key, "expected a nonempty array");
            cfg.seeds.clear();
            for (size_t i = 0; i < v.size(); ++i)
                cfg.seeds.push_back(as_seed(v[i], key + "[" + std::to_string(i) + "]"));
        } else if (key == "terminal") {
            const std::string s = as_string(v, key);
            if (s == "random_unit") cfg.terminal.kind = TerminalSpec::Kind::random_unit;
            else if (s == "gaussian_process")
                cfg.terminal.kind = TerminalSpec::Kind::gaussian_process;
            else fail(key, "expected 'random_unit' or 'gaussian_process'");
        } else if (key == "correlation_length") {
            cfg.terminal.correlation_length = as_positive(v, key);
        } else if (key == "adjoint_refine") {
            cfg.adjoint_refine = as_int(v, key);
            if (cfg.adjoint_refine < 1) fail(key, "must be at least 1");
        } else if (key == "reg_error_self_term") {
            cfg.reg_error_self_term = as_bool(v, key);
        } else if (key == "snapshot_times") {
            if (!v.is_array()) fail(key, "expected an array of times");
            cfg.snapshot_times.clear();
            for (size_t i = 0; i < v.size(); ++i)
                cfg.snapshot_times.push_back(
                    as_number(v[i], key + "[" + std::to_string(i) + "]"));
        } else if (key == "out_dir") {
            cfg.out_dir = as_string(v, key);
        }
    }

    if (cfg.dt > cfg.t_final + 1e-12)
        throw ConfigError("config.dt: must not exceed t_final");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    return parse_config(j);
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["scenario"] = scenario_name(cfg.scenario.kind);
    j["n_markers"] = cfg.scenario.n_markers;
    j["epsilon"] = cfg.scenario.epsilon;
    j["stiffness"] = cfg.scenario.stiffness;
    j["shear_rate"] = cfg.scenario.shear_rate;
    j["tether_stiffness"] = cfg.scenario.tether_stiffness;
    j["r_connect"] = cfg.scenario.r_connect;
    j["box_size"] = cfg.scenario.box_size;
    j["gravity"] = cfg.scenario.gravity;
    j["scenario_seed"] = cfg.scenario.seed;
    j["dt"] = cfg.dt;
    j["t_final"] = cfg.t_final;
    j["order"] = cfg.order;
    if (!cfg.tableau_file.empty()) j["tableau_file"] = cfg.tableau_file;
    j["mode"] = cfg.mode == Mode::singular_target ? "singular_target" : "regularized_exact";
    j["quad_nodes"] = cfg.quad_nodes;
    j["seed"] = cfg.seed;
    if (!cfg.seeds.empty()) j["seeds"] = cfg.seeds;
    j["terminal"] = cfg.terminal.kind == TerminalSpec::Kind::gaussian_process
                        ? "gaussian_process"
                        : "random_unit";
    j["correlation_length"] = cfg.terminal.correlation_length;
    j["adjoint_refine"] = cfg.adjoint_refine;
    j["reg_error_self_term"] = cfg.reg_error_self_term;
    if (!cfg.snapshot_times.empty()) j["snapshot_times"] = cfg.snapshot_times;
    j["out_dir"] = cfg.out_dir;
    return j;
}

ButcherTableau tableau_for(const RunConfig& cfg) {
    if (!cfg.tableau_file.empty()) return ButcherTableau::from_file(cfg.tableau_file);
    return ButcherTableau::by_name(cfg.order);
}

std::vector<uint64_t> effective_seeds(const RunConfig& cfg) {
    if (!cfg.seeds.empty()) return cfg.seeds;
    return {cfg.seed};
}

} // namespace stokesim
