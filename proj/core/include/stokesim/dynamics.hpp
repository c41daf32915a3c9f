#pragma once

// The method-of-regularized-Stokeslets velocity operator
//
//   S[x]_k = sum_j U(x_k - x_j) F_j[x] w_j
//
// with F the pointwise force density (springs, tether, gravity), w_j the
// marker quadrature weights, plus an optional background flow. Provides the
// regularized and singular evaluations, the Frechet derivative, and its exact
// adjoint. The regularized sum includes the j = k self term (finite); the
// singular sum excludes it.
//
// In closed_loop_arclength mode the weights are recomputed from the current
// positions as centered neighbor arclength differences, and both the Frechet
// derivative and the adjoint carry the corresponding weight-variation terms,
// so the adjoint is the exact transpose of the linearization in every mode.

#include <optional>

#include <Eigen/Dense>

#include "stokesim/forces.hpp"
#include "stokesim/kernels.hpp"

namespace stokesim {

enum class WeightMode {
    constant,              // weights fixed at MrsSystem::weights
    closed_loop_arclength, // ring of markers 0..n-1, w_k = half sum of adjacent edges
};

struct MrsSystem {
    KernelParams kernel;
    SpringNetwork network;
    std::optional<TetherConfig> tether;
    ExternalField field;
    WeightMode weight_mode = WeightMode::constant;
    VectorXd weights; // per marker, used in constant mode

    int dimension() const { return kernel.dimension; }
    int n_markers() const { return network.n_points; }
};

void validate(const MrsSystem& sys);

// total force density per marker: springs + tether + gravity
VectorXd force_density(const MrsSystem& sys, const VectorXd& x);

// current quadrature weights (constant or arclength, depending on mode)
VectorXd marker_weights(const MrsSystem& sys, const VectorXd& x);

VectorXd rhs_regularized(const MrsSystem& sys, double t, const VectorXd& x);
VectorXd rhs_singular(const MrsSystem& sys, double t, const VectorXd& x);

// directional derivative of rhs_regularized at x in direction y
VectorXd frechet_apply(const MrsSystem& sys, double t, const VectorXd& x, const VectorXd& y);

// exact transpose: <frechet_apply(x, y), phi> == <y, adjoint_apply(x, phi)>
VectorXd adjoint_apply(const MrsSystem& sys, double t, const VectorXd& x, const VectorXd& phi);

// (S_eps - S_0)[x] per marker, background flow excluded since it cancels.
// include_self keeps the finite U_eps(0) F_k w_k self term in the regularized
// sum; the singular sum never has one.
VectorXd mobility_difference(const MrsSystem& sys, const VectorXd& x, bool include_self);

// per-marker norms |(S_eps - S_0)_k|, used to color snapshots
VectorXd mobility_difference_magnitude(const MrsSystem& sys, const VectorXd& x, bool include_self);

} // namespace stokesim
