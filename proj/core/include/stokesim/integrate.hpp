#pragma once

// Explicit Runge-Kutta integration with full stage capture, plus the
// piecewise-polynomial reconstruction the error estimators integrate against.
//
// On each step interval the reconstruction X(t) = X_n + a1 (t-t_n) + a2 (t-t_n)^2
// is defined by a Galerkin condition: test against {1, 2(t-t_n)/dt - 1}. The
// constant-mode integrals use each stage's one-node rule (node t_n + c_l dt,
// weight dt) applied to the stage extrapolant, which reproduces the RK update
// exactly (nodal equivalence); the linear-mode integral uses the one-point
// midpoint rule, whose node is the zero of the linear test mode, forcing
// a2 = 0. The reconstruction is therefore the nodally exact affine
// interpolant for every tableau.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stokesim/errors.hpp"

namespace stokesim {

using Eigen::VectorXd;
using Rhs = std::function<VectorXd(double, const VectorXd&)>;

struct ButcherTableau {
    std::string name;
    int order = 0;                   // classical order, for reporting
    Eigen::MatrixXd a;               // strictly lower triangular
    VectorXd b;
    VectorXd c;

    int stages() const { return static_cast<int>(b.size()); }

    static ButcherTableau heun();
    static ButcherTableau rk4();
    static ButcherTableau rk6(); // Butcher's 7-stage sixth-order method
    static ButcherTableau by_name(const std::string& name);
    // JSON file with fields: name, order, stages, a, b, c
    static ButcherTableau from_file(const std::string& path);
};

// throws ConfigError on structural problems; shipped tableaus satisfy
// sum(b) == 1 and c == rowsum(a) exactly in double arithmetic
void validate(const ButcherTableau& tab, double tol = 1e-12);

struct ForwardTrajectory {
    ButcherTableau tableau;
    std::vector<double> times;               // n_steps + 1 nodes
    std::vector<VectorXd> states;            // nodal values
    std::vector<std::vector<VectorXd>> stages; // per interval, tableau.stages() slopes

    int n_intervals() const { return static_cast<int>(times.size()) - 1; }
    double dt(int n) const { return times[n + 1] - times[n]; }
};

// nodal update x + dt * sum_l b_l k_l, summed in stage order; shared between
// the stepper and tests so the equivalence check can compare bitwise
VectorXd rk_combine(const VectorXd& x, double dt, const VectorXd& b,
                    const std::vector<VectorXd>& stages);

// single step from (t, x); fills stages
VectorXd rk_step(const ButcherTableau& tab, const Rhs& rhs, double t, const VectorXd& x,
                 double dt, std::vector<VectorXd>& stages);

ForwardTrajectory solve_forward(const ButcherTableau& tab, const Rhs& rhs, const VectorXd& x0,
                                double t0, double t1, double dt);
ForwardTrajectory solve_forward(const ButcherTableau& tab, const Rhs& rhs, const VectorXd& x0,
                                const std::vector<double>& partition);

// value at time t of the affine extrapolation stage l evaluates through:
// X_n + s_l (t - t_n) with s_l = (sum_j a_lj k_j)/c_l (s_l = k_l when c_l = 0),
// so the value at t_n + c_l dt is exactly the stage argument
VectorXd stage_extrapolant(const ForwardTrajectory& traj, int interval, int stage, double t);

struct NefemTrajectory {
    std::vector<double> times;
    int degree = 2;
    // monomial coefficients in tau = t - t_n: coeff[n][p] multiplies tau^p
    std::vector<std::vector<VectorXd>> coeff;

    int n_intervals() const { return static_cast<int>(times.size()) - 1; }
    // interval containing t; right-continuous at interior nodes, the last
    // interval owns t = times.back()
    int interval_of(double t) const;
    VectorXd eval(double t) const;
    VectorXd eval_derivative(double t) const;
    VectorXd eval_on(int interval, double t) const;
    VectorXd eval_derivative_on(int interval, double t) const;
};

// Nodally exact piecewise-polynomial reconstruction. With the midpoint-rule
// linear test mode the quadratic coefficient vanishes identically, so both
// degrees yield the affine interpolant; degree 2 stores the explicit zero.
NefemTrajectory nefem_reconstruct(const ForwardTrajectory& traj, int degree = 2);

} // namespace stokesim
