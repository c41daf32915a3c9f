#pragma once

// End-to-end drivers behind the command line: run a forward simulation, run
// the adjoint error breakdown over one or more terminal-data seeds, run a
// step-halving convergence study, and write each result set under the
// configured output directory.

#include <string>
#include <vector>

#include "stokesim/adjoint.hpp"
#include "stokesim/config.hpp"
#include "stokesim/report.hpp"

namespace stokesim {

struct SimulateResult {
    RunConfig config;
    ScenarioInstance scenario;
    ButcherTableau tableau;
    ForwardTrajectory forward;
    NefemTrajectory reconstruction;
};

SimulateResult run_simulate(const RunConfig& cfg);

struct SeedEstimate {
    uint64_t seed = 0;
    ErrorBreakdown breakdown;
    double estimate = 0.0;
    double z_norm_final = 0.0;
};

struct EstimateResult {
    SimulateResult sim;
    std::vector<SeedEstimate> seeds;
};

EstimateResult run_estimate(const RunConfig& cfg);

struct ConvergeResult {
    std::string method;
    double reference_dt = 0.0;
    std::vector<ConvergenceRow> rows;
};

// solves at dt, dt/2, ..., dt/2^(levels-1); errors are terminal-state gaps
// against a sixth-order reference on a further refined step
ConvergeResult run_converge(const RunConfig& cfg, int levels);

// write result sets under cfg.out_dir; each returns the manifest path
std::string write_simulate_outputs(const SimulateResult& res);
std::string write_estimate_outputs(const EstimateResult& res);
std::string write_converge_outputs(const RunConfig& cfg, const ConvergeResult& res);

} // namespace stokesim
