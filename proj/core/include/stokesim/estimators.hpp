#pragma once

// Interval-by-interval decomposition of the residual pairing <R[X], z> into
//
//   E_R  residual against the unprojected part of z
//   E_E  gap between the stage-extrapolated vector field and the field at X
//   E_Q  stage quadrature versus exact integration against the projection of z
//   E_Re regularized minus singular mobility, paired with z (singular-target
//        mode only)
//
// and the terminal-error estimate they imply. With pi the L2 projection onto
// per-interval linears, E_R + E_E + E_Q equals <R[X], z> identically; the
// identity test exercises exactly that cancellation.

#include <functional>
#include <optional>
#include <vector>

#include "stokesim/adjoint.hpp"
#include "stokesim/dynamics.hpp"
#include "stokesim/integrate.hpp"

namespace stokesim {

struct QuadratureRule {
    VectorXd nodes;   // on [0, 1]
    VectorXd weights; // sum to 1
};

// Gauss-Legendre, exact through polynomial degree 2n - 1
QuadratureRule gauss_legendre(int n);

enum class Mode { regularized_exact, singular_target };

struct EstimatorOptions {
    Mode mode = Mode::regularized_exact;
    int quad_nodes = 5;
    bool reg_include_self = true; // keep the U_eps(0) self term in E_Re
    int panels = 1;               // sub-panels per interval, matches adjoint refinement
};

struct IntervalBreakdown {
    double t0 = 0.0;
    double t1 = 0.0;
    double e_r = 0.0;
    double e_e = 0.0;
    double e_q = 0.0;
    double e_re = 0.0;
    double z_norm_start = 0.0;
};

struct ErrorBreakdown {
    Mode mode = Mode::regularized_exact;
    std::vector<IntervalBreakdown> intervals;
    double z_norm_final = 0.0;

    double sum_r() const;
    double sum_e() const;
    double sum_q() const;
    double sum_re() const;
};

// L2 projection of f onto {1, V1} over [t0, t1], V1(t) = 2(t-t0)/(t1-t0) - 1;
// returns the two coefficient vectors
std::pair<VectorXd, VectorXd> project_l2(const std::function<VectorXd(double)>& f, double t0,
                                         double t1, const QuadratureRule& rule, int panels = 1);

ErrorBreakdown assemble_breakdown(const MrsSystem& sys, const ForwardTrajectory& fwd,
                                  const NefemTrajectory& rec, const AdjointTrajectory& adj,
                                  const EstimatorOptions& opts);

// single components of one interval (convenience wrappers over the assembly)
double residual_error(const MrsSystem& sys, const ForwardTrajectory& fwd,
                      const NefemTrajectory& rec, const AdjointTrajectory& adj, int interval,
                      const EstimatorOptions& opts);
double explicit_error(const MrsSystem& sys, const ForwardTrajectory& fwd,
                      const NefemTrajectory& rec, const AdjointTrajectory& adj, int interval,
                      const EstimatorOptions& opts);
double quadrature_error(const MrsSystem& sys, const ForwardTrajectory& fwd,
                        const NefemTrajectory& rec, const AdjointTrajectory& adj, int interval,
                        const EstimatorOptions& opts);
double regularization_error(const MrsSystem& sys, const ForwardTrajectory& fwd,
                            const NefemTrajectory& rec, const AdjointTrajectory& adj, int interval,
                            const EstimatorOptions& opts);

// direct quadrature of <X' - F(t, X), z> over all intervals, the independent
// route the identity test compares against
double residual_pairing(const MrsSystem& sys, const NefemTrajectory& rec,
                        const AdjointTrajectory& adj, const EstimatorOptions& opts);

// signed estimate of (e(T), z(T)); includes E_Re in singular-target mode
double total_estimate(const ErrorBreakdown& breakdown);

// estimate / exact; empty when the exact pairing is too close to zero to
// support a meaningful ratio
std::optional<double> effectivity(double estimate, double exact_pairing);

} // namespace stokesim
