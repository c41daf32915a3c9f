#pragma once

// Output writers: breakdown / trajectory / convergence CSVs, snapshot JSON,
// atomically written run manifests, and a small self-contained SVG plotter.
// All floating-point output goes through one %.17g formatter so identical runs
// produce byte-identical files.

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stokesim/dynamics.hpp"
#include "stokesim/estimators.hpp"
#include "stokesim/integrate.hpp"

namespace stokesim {

std::string format_g17(double x);

struct BreakdownRow {
    double t0 = 0.0, t1 = 0.0;
    double e_r = 0.0, e_e = 0.0, e_q = 0.0, e_re = 0.0;
    double cum_r = 0.0, cum_e = 0.0, cum_q = 0.0, cum_re = 0.0;
    double z_norm = 0.0;
};

struct BreakdownTable {
    std::vector<BreakdownRow> rows;
};

BreakdownTable tabulate(const ErrorBreakdown& breakdown);

void write_breakdown_csv(const std::string& path, const BreakdownTable& table);
BreakdownTable read_breakdown_csv(const std::string& path);

void write_trajectory_csv(const std::string& path, const ForwardTrajectory& traj);

struct ConvergenceRow {
    double dt = 0.0;
    double error = 0.0;
    double factor = 0.0; // log2 ratio to previous row; NaN on the first row
};
void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows);

void write_snapshot_json(const std::string& path, const MrsSystem& sys, double t,
                         const VectorXd& x, bool reg_include_self);

// write-to-temporary-then-rename, so readers never see a partial manifest
void write_manifest(const std::string& path, const nlohmann::json& manifest);

// 2x2 panel plot of cumulative |E_E|, |E_R|, |E_Re| and the adjoint norm
void write_breakdown_plot_svg(const std::string& path, const BreakdownTable& table,
                              bool log_scale);

} // namespace stokesim
