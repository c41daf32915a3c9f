// Command-line front end: simulate / estimate / converge / plot / scenarios.
// Exit codes: 0 success, 2 configuration problem, 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stokesim/errors.hpp"
#include "stokesim/pipeline.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::string> scenario;
    std::optional<int> n_markers;
    std::optional<double> dt;
    std::optional<double> t_final;
    std::optional<double> epsilon;
    std::optional<std::string> order;
    std::optional<std::string> tableau;
    std::optional<std::string> mode;
    std::optional<int> quad_nodes;
    std::optional<uint64_t> seed;
    std::vector<uint64_t> seeds;
    std::optional<std::string> terminal;
    std::optional<int> adjoint_refine;
    std::optional<std::string> out_dir;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "JSON config (or manifest) file");
    sub->add_option("--scenario", args.scenario,
                    "scenario name: circle_relax, circle_shear, fiber_network");
    sub->add_option("--n-markers", args.n_markers, "marker count override");
    sub->add_option("--dt", args.dt, "time step override");
    sub->add_option("--t-final", args.t_final, "final time override");
    sub->add_option("--eps", args.epsilon, "regularization length override");
    sub->add_option("--order", args.order, "integrator: heun, rk4, rk6");
    sub->add_option("--tableau", args.tableau, "Butcher tableau JSON file");
    sub->add_option("--mode", args.mode, "estimator mode: regularized_exact, singular_target");
    sub->add_option("--quad-nodes", args.quad_nodes, "Gauss nodes per panel");
    sub->add_option("--seed", args.seed, "terminal-data seed");
    sub->add_option("--seeds", args.seeds, "several terminal-data seeds")->delimiter(',');
    sub->add_option("--terminal", args.terminal, "terminal data: random_unit, gaussian_process");
    sub->add_option("--adjoint-refine", args.adjoint_refine,
                    "adjoint substeps per forward interval");
    sub->add_option("--out", args.out_dir, "output directory");
}

stokesim::RunConfig build_config(const CommonArgs& args) {
    stokesim::RunConfig cfg;
    if (!args.config_path.empty()) cfg = stokesim::load_config(args.config_path);
    if (args.scenario) cfg.scenario.kind = stokesim::scenario_by_name(*args.scenario);
    if (args.n_markers) cfg.scenario.n_markers = *args.n_markers;
    if (args.dt) cfg.dt = *args.dt;
    if (args.t_final) cfg.t_final = *args.t_final;
    if (args.epsilon) cfg.scenario.epsilon = *args.epsilon;
    if (args.order) cfg.order = *args.order;
    if (args.tableau) cfg.tableau_file = *args.tableau;
    if (args.mode) {
        if (*args.mode == "regularized_exact") cfg.mode = stokesim::Mode::regularized_exact;
        else if (*args.mode == "singular_target") cfg.mode = stokesim::Mode::singular_target;
        else throw stokesim::ConfigError("unknown mode '" + *args.mode + "'");
    }
    if (args.quad_nodes) cfg.quad_nodes = *args.quad_nodes;
    if (args.seed) cfg.seed = *args.seed;
    if (!args.seeds.empty()) cfg.seeds = args.seeds;
    if (args.terminal) {
        if (*args.terminal == "random_unit")
            cfg.terminal.kind = stokesim::TerminalSpec::Kind::random_unit;
        else if (*args.terminal == "gaussian_process")
            cfg.terminal.kind = stokesim::TerminalSpec::Kind::gaussian_process;
        else throw stokesim::ConfigError("unknown terminal kind '" + *args.terminal + "'");
    }
    if (args.adjoint_refine) cfg.adjoint_refine = *args.adjoint_refine;
    if (args.out_dir) cfg.out_dir = *args.out_dir;
    if (!(cfg.dt > 0.0)) throw stokesim::ConfigError("dt must be positive");
    if (!(cfg.t_final > 0.0)) throw stokesim::ConfigError("t_final must be positive");
    if (!(cfg.scenario.epsilon > 0.0)) throw stokesim::ConfigError("eps must be positive");
    if (cfg.quad_nodes < 1) throw stokesim::ConfigError("quad-nodes must be at least 1");
    if (cfg.adjoint_refine < 1) throw stokesim::ConfigError("adjoint-refine must be at least 1");
    return cfg;
}

int run_simulate_cmd(const CommonArgs& args) {
    const stokesim::RunConfig cfg = build_config(args);
    const stokesim::SimulateResult res = stokesim::run_simulate(cfg);
    const std::string manifest = stokesim::write_simulate_outputs(res);
    std::cout << "simulated " << stokesim::scenario_name(cfg.scenario.kind) << " over "
              << res.forward.n_intervals() << " steps of dt=" << cfg.dt << "\n";
    std::cout << "manifest: " << manifest << "\n";
    return 0;
}

int run_estimate_cmd(const CommonArgs& args) {
    const stokesim::RunConfig cfg = build_config(args);
    const stokesim::EstimateResult res = stokesim::run_estimate(cfg);
    const std::string manifest = stokesim::write_estimate_outputs(res);
    for (const auto& se : res.seeds) {
        const auto& b = se.breakdown;
        std::cout << "seed " << se.seed << ": E_R=" << stokesim::format_g17(b.sum_r())
                  << " E_E=" << stokesim::format_g17(b.sum_e())
                  << " E_Q=" << stokesim::format_g17(b.sum_q())
                  << " E_Re=" << stokesim::format_g17(b.sum_re())
                  << " estimate=" << stokesim::format_g17(se.estimate) << "\n";
    }
    std::cout << "manifest: " << manifest << "\n";
    return 0;
}

int run_converge_cmd(const CommonArgs& args, int levels) {
    const stokesim::RunConfig cfg = build_config(args);
    const stokesim::ConvergeResult res = stokesim::run_converge(cfg, levels);
    const std::string manifest = stokesim::write_converge_outputs(cfg, res);
    std::cout << "method " << res.method << "\n";
    for (const auto& row : res.rows) {
        std::cout << "dt=" << stokesim::format_g17(row.dt)
                  << " error=" << stokesim::format_g17(row.error);
        if (std::isfinite(row.factor)) std::cout << " factor=" << stokesim::format_g17(row.factor);
        std::cout << "\n";
    }
    std::cout << "manifest: " << manifest << "\n";
    return 0;
}

int run_plot_cmd(const std::string& in_path, const std::string& out_path, bool log_scale) {
    // accept a run directory as shorthand for the breakdown csv inside it
    std::string path = in_path;
    if (std::filesystem::is_directory(path))
        path = (std::filesystem::path(path) / "breakdown.csv").string();
    const stokesim::BreakdownTable table = stokesim::read_breakdown_csv(path);
    stokesim::write_breakdown_plot_svg(out_path, table, log_scale);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"regularized-Stokeslet fiber simulation with adjoint error breakdown"};
    app.require_subcommand(1);

    CommonArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "run a forward simulation");
    add_common(sim, sim_args);

    CommonArgs est_args;
    CLI::App* est = app.add_subcommand("estimate", "simulate plus adjoint error breakdown");
    add_common(est, est_args);

    CommonArgs conv_args;
    int levels = 4;
    CLI::App* conv = app.add_subcommand("converge", "step-halving convergence study");
    add_common(conv, conv_args);
    conv->add_option("--levels", levels, "number of halvings to run")->check(CLI::Range(2, 12));

    std::string plot_in, plot_out = "breakdown.svg";
    bool plot_log = false;
    CLI::App* plot = app.add_subcommand("plot", "render a breakdown csv as svg");
    plot->add_option("--in", plot_in, "breakdown csv (or run directory) to plot")->required();
    plot->add_option("--out", plot_out, "svg file to write");
    plot->add_flag("--log", plot_log, "log-scale vertical axes");

    CLI::App* scen = app.add_subcommand("scenarios", "list available scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return run_simulate_cmd(sim_args);
        if (est->parsed()) return run_estimate_cmd(est_args);
        if (conv->parsed()) return run_converge_cmd(conv_args, levels);
        if (plot->parsed()) return run_plot_cmd(plot_in, plot_out, plot_log);
        if (scen->parsed()) {
            for (const auto& name : stokesim::scenario_names()) std::cout << name << "\n";
            return 0;
        }
    } catch (const stokesim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const stokesim::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
