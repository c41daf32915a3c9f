// Hot-path benchmarks: velocity assembly in 2d/3d, the adjoint operator
// apply, a full step, and the error-breakdown assembly over a short run.

#include <benchmark/benchmark.h>

#include "stokesim/adjoint.hpp"
#include "stokesim/dynamics.hpp"
#include "stokesim/estimators.hpp"
#include "stokesim/integrate.hpp"
#include "stokesim/pipeline.hpp"
#include "stokesim/rng.hpp"
#include "stokesim/scenarios.hpp"

namespace {

using stokesim::ScenarioConfig;
using stokesim::ScenarioInstance;
using stokesim::ScenarioKind;
using stokesim::VectorXd;

ScenarioInstance ring2d(int n) {
    ScenarioConfig sc;
    sc.kind = ScenarioKind::circle_relax;
    sc.n_markers = n;
    sc.epsilon = 0.1;
    return stokesim::make_scenario(sc);
}

ScenarioInstance fibers3d(int n) {
    ScenarioConfig sc;
    sc.kind = ScenarioKind::fiber_network;
    sc.n_markers = n;
    sc.epsilon = 0.08;
    sc.box_size = 2.0;
    return stokesim::make_scenario(sc);
}

void bm_rhs_2d(benchmark::State& state) {
    const ScenarioInstance inst = ring2d(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(stokesim::rhs_regularized(inst.system, 0.0, inst.x0));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_rhs_2d)->Arg(64)->Arg(256)->Complexity(benchmark::oNSquared);

void bm_rhs_3d(benchmark::State& state) {
    const ScenarioInstance inst = fibers3d(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(stokesim::rhs_regularized(inst.system, 0.0, inst.x0));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(bm_rhs_3d)->Arg(64)->Arg(256)->Complexity(benchmark::oNSquared);

void bm_adjoint_apply(benchmark::State& state) {
    const ScenarioInstance inst = ring2d(static_cast<int>(state.range(0)));
    stokesim::Rng rng(5);
    VectorXd phi(inst.x0.size());
    for (int i = 0; i < phi.size(); ++i) phi[i] = rng.gaussian();
    for (auto _ : state) {
        benchmark::DoNotOptimize(stokesim::adjoint_apply(inst.system, 0.0, inst.x0, phi));
    }
}
BENCHMARK(bm_adjoint_apply)->Arg(64)->Arg(256);

void bm_rk_step(benchmark::State& state) {
    const ScenarioInstance inst = ring2d(64);
    const stokesim::ButcherTableau tab = stokesim::ButcherTableau::rk6();
    const auto rhs = [&](double t, const VectorXd& x) {
        return stokesim::rhs_regularized(inst.system, t, x);
    };
    std::vector<VectorXd> stages;
    for (auto _ : state) {
        benchmark::DoNotOptimize(stokesim::rk_step(tab, rhs, 0.0, inst.x0, 0.01, stages));
    }
}
BENCHMARK(bm_rk_step);

void bm_breakdown(benchmark::State& state) {
    const ScenarioInstance inst = ring2d(32);
    const stokesim::ButcherTableau tab = stokesim::ButcherTableau::heun();
    const auto rhs = [&](double t, const VectorXd& x) {
        return stokesim::rhs_regularized(inst.system, t, x);
    };
    const stokesim::ForwardTrajectory traj =
        stokesim::solve_forward(tab, rhs, inst.x0, 0.0, 0.25, 0.05);
    const stokesim::NefemTrajectory rec = stokesim::nefem_reconstruct(traj, 2);
    stokesim::Rng rng(9);
    const VectorXd z_t = stokesim::make_terminal(stokesim::TerminalSpec{}, inst.system, rng);
    const stokesim::AdjointTrajectory adj =
        stokesim::solve_adjoint(inst.system, rec, z_t, tab, 1);
    stokesim::EstimatorOptions opts;
    opts.mode = stokesim::Mode::singular_target;
    for (auto _ : state) {
        benchmark::DoNotOptimize(stokesim::assemble_breakdown(inst.system, traj, rec, adj, opts));
    }
}
BENCHMARK(bm_breakdown);

} // namespace

BENCHMARK_MAIN();
