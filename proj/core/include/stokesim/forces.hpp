#pragma once

// Pointwise force models and background flows. Forces are densities per
// marker; the mobility kernel and quadrature weights are applied elsewhere.
// States are flat vectors of length dim * n with marker k occupying
// [dim*k, dim*k + dim).

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "stokesim/errors.hpp"

namespace stokesim {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct SpringEdge {
    int a = 0;
    int b = 0;
    double stiffness = 1.0;
    double rest_length = 1.0;
};

// Symmetric network: each edge acts on both endpoints with opposite sign, so
// spring forces sum to zero over the system. Edge order is part of the
// contract; evaluation accumulates in this order to keep runs bit-identical.
struct SpringNetwork {
    int n_points = 0;
    std::vector<SpringEdge> edges;
};

void validate(const SpringNetwork& net);

struct TetherConfig {
    VectorXd reference; // flat, dim * n
    double stiffness = 0.0;
};

struct ExternalField {
    enum class Kind { none, linear_flow, gravity };
    Kind kind = Kind::none;
    MatrixXd flow;    // dim x dim, velocity u(x) = flow * x
    VectorXd gravity; // dim, force density added to every marker

    static ExternalField none() { return {}; }
    static ExternalField linear_flow(const MatrixXd& c);
    static ExternalField uniform_gravity(const VectorXd& g);
};

// F_b = sum_edges k (|x_a - x_b|/rest - 1) (x_a - x_b)/|x_a - x_b|, force on b
// toward a when stretched, with the opposite sign on a.
VectorXd spring_forces(const SpringNetwork& net, int dim, const VectorXd& x);

// Directional derivative of spring_forces at x in direction y. The per-edge
// block is k[(1/rest - 1/|dx|)(I - tt) + (1/rest) tt] acting on (y_a - y_b);
// the assembled operator is self-adjoint.
VectorXd spring_jacobian_apply(const SpringNetwork& net, int dim, const VectorXd& x,
                               const VectorXd& y);

VectorXd tether_forces(const TetherConfig& tether, const VectorXd& x);

VectorXd external_velocity(const ExternalField& field, int dim, const VectorXd& x);

// Adjoint of the state derivative of external_velocity: per marker C^T phi_k
// for a linear flow, zero otherwise.
VectorXd external_adjoint_apply(const ExternalField& field, int dim, const VectorXd& phi);

} // namespace stokesim
