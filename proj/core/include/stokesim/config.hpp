#pragma once

// JSON run configuration: parsing with per-field error paths, defaulting, and
// round-tripping into run manifests. A config file may either be the bare
// object or a previously written manifest wrapping it under "config".

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stokesim/adjoint.hpp"
#include "stokesim/estimators.hpp"
#include "stokesim/integrate.hpp"
#include "stokesim/scenarios.hpp"

namespace stokesim {

struct RunConfig {
    ScenarioConfig scenario;
    double dt = 0.05;
    double t_final = 1.0;
    std::string order = "rk6"; // heun | rk4 | rk6, ignored when tableau_file set
    std::string tableau_file;
    Mode mode = Mode::regularized_exact;
    int quad_nodes = 5;
    uint64_t seed = 1;
    std::vector<uint64_t> seeds; // multi-seed runs; falls back to {seed}
    TerminalSpec terminal;
    int adjoint_refine = 1;
    bool reg_error_self_term = true;
    std::vector<double> snapshot_times;
    std::string out_dir = "out";
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// the effective configuration, fully spelled out for the manifest
nlohmann::json config_to_json(const RunConfig& cfg);

// tableau selected by the config (named or loaded from tableau_file)
ButcherTableau tableau_for(const RunConfig& cfg);

// seeds to run: `seeds` if given, else {seed}
std::vector<uint64_t> effective_seeds(const RunConfig& cfg);

} // namespace stokesim
