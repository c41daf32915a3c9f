#include "stokesim/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <limits>

#include <nlohmann/json.hpp>

#include "stokesim/errors.hpp"
#include "stokesim/rng.hpp"

namespace stokesim {

namespace fs = std::filesystem;

namespace {

Rhs make_rhs(const MrsSystem& sys) {
    return [&sys](double t, const VectorXd& x) { return rhs_regularized(sys, t, x); };
}

nlohmann::json base_manifest(const RunConfig& cfg, const std::string& command) {
    nlohmann::json j;
    j["schema"] = "run-manifest-v1";
    j["command"] = command;
    j["config"] = config_to_json(cfg);
    return j;
}

std::string snapshot_name(size_t idx) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%03zu.json", idx);
    return buf;
}

std::vector<std::string> write_common_outputs(const SimulateResult& res, const fs::path& dir) {
    std::vector<std::string> outputs;
    write_trajectory_csv((dir / "trajectory.csv").string(), res.forward);
    outputs.push_back("trajectory.csv");
    const RunConfig& cfg = res.config;
    for (size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
        const double t = cfg.snapshot_times[i];
        if (t < -1e-9 || t > cfg.t_final + 1e-9)
            throw ConfigError("snapshot time " + format_g17(t) + " outside [0, t_final]");
        const double tc = std::min(std::max(t, 0.0), cfg.t_final);
        const std::string name = snapshot_name(i);
        write_snapshot_json((dir / name).string(), res.scenario.system, tc,
                            res.reconstruction.eval(tc), cfg.reg_error_self_term);
        outputs.push_back(name);
    }
    return outputs;
}

} // namespace

SimulateResult run_simulate(const RunConfig& cfg) {
    SimulateResult res;
    res.config = cfg;
    res.scenario = make_scenario(cfg.scenario);
    res.tableau = tableau_for(cfg);
    validate(res.tableau);
    const Rhs rhs = make_rhs(res.scenario.system);
    res.forward = solve_forward(res.tableau, rhs, res.scenario.x0, 0.0, cfg.t_final, cfg.dt);
    res.reconstruction = nefem_reconstruct(res.forward, 2);
    return res;
}

EstimateResult run_estimate(const RunConfig& cfg) {
    EstimateResult out;
    out.sim = run_simulate(cfg);
    const MrsSystem& sys = out.sim.scenario.system;

    EstimatorOptions opts;
    opts.mode = cfg.mode;
    opts.quad_nodes = cfg.quad_nodes;
    opts.reg_include_self = cfg.reg_error_self_term;
    opts.panels = cfg.adjoint_refine;

    for (uint64_t seed : effective_seeds(cfg)) {
        Rng rng(seed);
        const VectorXd z_t = make_terminal(cfg.terminal, sys, rng);
        const AdjointTrajectory adj =
            solve_adjoint(sys, out.sim.reconstruction, z_t, out.sim.tableau, cfg.adjoint_refine);
        SeedEstimate se;
        se.seed = seed;
        se.breakdown = assemble_breakdown(sys, out.sim.forward, out.sim.reconstruction, adj, opts);
        se.estimate = total_estimate(se.breakdown);
        se.z_norm_final = se.breakdown.z_norm_final;
        out.seeds.push_back(std::move(se));
    }
    return out;
}

ConvergeResult run_converge(const RunConfig& cfg, int levels) {
    if (levels < 2) throw ConfigError("converge: need at least 2 levels");
    if (levels > 12) throw ConfigError("converge: too many levels");

    const ScenarioInstance inst = make_scenario(cfg.scenario);
    const Rhs rhs = make_rhs(inst.system);
    const ButcherTableau tab = tableau_for(cfg);
    validate(tab);

    ConvergeResult res;
    res.method = tab.name;

    const double dt_fine = cfg.dt / std::pow(2.0, levels - 1);
    res.reference_dt = dt_fine / 4.0;
    const ForwardTrajectory ref = solve_forward(ButcherTableau::rk6(), rhs, inst.x0, 0.0,
                                                cfg.t_final, res.reference_dt);
    const VectorXd x_ref = ref.states.back();

    double prev_err = 0.0;
    for (int level = 0; level < levels; ++level) {
        const double dt = cfg.dt / std::pow(2.0, level);
        const ForwardTrajectory traj = solve_forward(tab, rhs, inst.x0, 0.0, cfg.t_final, dt);
        ConvergenceRow row;
        row.dt = dt;
        row.error = (traj.states.back() - x_ref).norm();
        row.factor = level == 0 ? std::numeric_limits<double>::quiet_NaN()
                                : convergence_factor(prev_err, row.error);
        prev_err = row.error;
        res.rows.push_back(row);
    }
    return res;
}

std::string write_simulate_outputs(const SimulateResult& res) {
    const fs::path dir(res.config.out_dir);
    fs::create_directories(dir);
    nlohmann::json manifest = base_manifest(res.config, "simulate");
    manifest["outputs"] = write_common_outputs(res, dir);
    manifest["results"] = {
        {"n_intervals", res.forward.n_intervals()},
        {"final_state_norm", res.forward.states.back().norm()},
    };
    const std::string path = (dir / "manifest.json").string();
    write_manifest(path, manifest);
    return path;
}

std::string write_estimate_outputs(const EstimateResult& res) {
    const fs::path dir(res.sim.config.out_dir);
    fs::create_directories(dir);
    nlohmann::json manifest = base_manifest(res.sim.config, "estimate");
    std::vector<std::string> outputs = write_common_outputs(res.sim, dir);

    nlohmann::json per_seed = nlohmann::json::array();
    double max_r = 0.0, max_e = 0.0, max_q = 0.0, max_re = 0.0, max_est = 0.0;
    for (size_t i = 0; i < res.seeds.size(); ++i) {
        const SeedEstimate& se = res.seeds[i];
        const BreakdownTable table = tabulate(se.breakdown);
        const std::string name = "breakdown_seed" + std::to_string(se.seed) + ".csv";
        write_breakdown_csv((dir / name).string(), table);
        outputs.push_back(name);
        if (i == 0) {
            write_breakdown_csv((dir / "breakdown.csv").string(), table);
            outputs.push_back("breakdown.csv");
        }
        per_seed.push_back({
            {"seed", se.seed},
            {"total_R", se.breakdown.sum_r()},
            {"total_E", se.breakdown.sum_e()},
            {"total_Q", se.breakdown.sum_q()},
            {"total_Re", se.breakdown.sum_re()},
            {"estimate", se.estimate},
            {"z_norm_final", se.z_norm_final},
        });
        max_r = std::max(max_r, std::abs(se.breakdown.sum_r()));
        max_e = std::max(max_e, std::abs(se.breakdown.sum_e()));
        max_q = std::max(max_q, std::abs(se.breakdown.sum_q()));
        max_re = std::max(max_re, std::abs(se.breakdown.sum_re()));
        max_est = std::max(max_est, std::abs(se.estimate));
    }
    manifest["results"] = {
        {"seeds", per_seed},
        {"max_abs",
         {{"total_R", max_r},
          {"total_E", max_e},
          {"total_Q", max_q},
          {"total_Re", max_re},
          {"estimate", max_est}}},
    };
    manifest["outputs"] = outputs;
    const std::string path = (dir / "manifest.json").string();
    write_manifest(path, manifest);
    return path;
}

std::string write_converge_outputs(const RunConfig& cfg, const ConvergeResult& res) {
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    write_convergence_csv((dir / "converge.csv").string(), res.rows);
    nlohmann::json manifest = base_manifest(cfg, "converge");
    manifest["outputs"] = {"converge.csv"};
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : res.rows) {
        nlohmann::json row = {{"dt", r.dt}, {"error", r.error}};
        if (std::isfinite(r.factor)) row["factor"] = r.factor;
        rows.push_back(row);
    }
    manifest["results"] = {
        {"method", res.method},
        {"reference_dt", res.reference_dt},
        {"levels", rows},
    };
    const std::string path = (dir / "manifest.json").string();
    write_manifest(path, manifest);
    return path;
}

} // namespace stokesim
