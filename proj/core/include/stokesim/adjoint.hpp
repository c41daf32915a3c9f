#pragma once

// Backward adjoint solve along a reconstructed forward trajectory. With
// A*(t) the adjoint of the velocity linearization evaluated at X(t), z solves
//
//   -dz/dt = A*(t) z,   z(T) given,
//
// integrated as dz/dtau = A*(T - tau) z over tau in [0, T] and reconstructed
// to its own piecewise polynomial for the estimator quadratures.

#include <Eigen/Dense>

#include "stokesim/dynamics.hpp"
#include "stokesim/integrate.hpp"
#include "stokesim/rng.hpp"

namespace stokesim {

struct TerminalSpec {
    enum class Kind { random_unit, gaussian_process };
    Kind kind = Kind::random_unit;
    // gaussian_process: squared-exponential correlation along the marker ring,
    // length measured in the same units as arclength (ring circumference for a
    // resting circle is 2 pi)
    double correlation_length = 10.0;
};

// unit-norm terminal data; gaussian_process requires a closed-loop system
VectorXd make_terminal(const TerminalSpec& spec, const MrsSystem& sys, Rng& rng);

// A*(t) z with the forward state taken from the reconstruction
VectorXd adjoint_rhs(const MrsSystem& sys, const NefemTrajectory& forward, double t,
                     const VectorXd& z);

struct AdjointTrajectory {
    double t_final = 0.0;
    ForwardTrajectory solve_tau;   // trajectory of the tau = T - t problem
    NefemTrajectory rec_tau;

    VectorXd eval(double t) const { return rec_tau.eval(t_final - t); }
    VectorXd terminal() const { return solve_tau.states.front(); }
    VectorXd initial() const { return solve_tau.states.back(); }
};

// refine subdivides every forward interval into that many adjoint steps
AdjointTrajectory solve_adjoint(const MrsSystem& sys, const NefemTrajectory& forward,
                                const VectorXd& z_terminal, const ButcherTableau& tab,
                                int refine = 1);

} // namespace stokesim
