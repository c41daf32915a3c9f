#include "stokesim/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace stokesim {

void validate(const MrsSystem& sys) {
    if (sys.kernel.dimension != 2 && sys.kernel.dimension != 3)
        throw ConfigError("system dimension must be 2 or 3");
    if (!(sys.kernel.epsilon > 0.0))
        throw ConfigError("regularization epsilon must be positive");
    validate(sys.network);
    const int n = sys.network.n_points;
    const int dim = sys.kernel.dimension;
    if (sys.weight_mode == WeightMode::constant) {
        if (sys.weights.size() != n)
            throw ConfigError("weights size does not match marker count");
    } else {
        if (n < 3)
            throw ConfigError("arclength weights need at least 3 markers in a ring");
    }
    if (sys.tether && sys.tether->reference.size() != static_cast<long>(dim) * n)
        throw ConfigError("tether reference size does not match state size");
    if (sys.field.kind == ExternalField::Kind::linear_flow && sys.field.flow.rows() != dim)
        throw ConfigError("flow matrix dimension does not match system dimension");
    if (sys.field.kind == ExternalField::Kind::gravity && sys.field.gravity.size() != dim)
        throw ConfigError("gravity dimension does not match system dimension");
}

VectorXd force_density(const MrsSystem& sys, const VectorXd& x) {
    VectorXd f = spring_forces(sys.network, sys.dimension(), x);
    if (sys.tether && sys.tether->stiffness != 0.0) f += tether_forces(*sys.tether, x);
    if (sys.field.kind == ExternalField::Kind::gravity) {
        const int dim = sys.dimension();
        for (int k = 0; k < sys.n_markers(); ++k) f.segment(dim * k, dim) += sys.field.gravity;
    }
    return f;
}

namespace {

// combined spring + tether jacobian action; self-adjoint
VectorXd force_jacobian_apply(const MrsSystem& sys, const VectorXd& x, const VectorXd& y) {
    VectorXd out = spring_jacobian_apply(sys.network, sys.dimension(), x, y);
    if (sys.tether && sys.tether->stiffness != 0.0) out -= sys.tether->stiffness * y;
    return out;
}

struct RingGeometry {
    std::vector<double> edge_len;       // edge e joins e and (e+1) % n
    std::vector<Eigen::VectorXd> unit;  // unit vector from e toward (e+1) % n
};

RingGeometry ring_geometry(int dim, int n, const VectorXd& x) {
    RingGeometry g;
    g.edge_len.resize(n);
    g.unit.resize(n);
    for (int a = 0; a < n; ++a) {
        const int b = (a + 1) % n;
        VectorXd d = x.segment(dim * b, dim) - x.segment(dim * a, dim);
        const double len = d.norm();
        if (!(len > 0.0) || !std::isfinite(len)) {
            std::ostringstream os;
            os << "ring markers " << a << " and " << b << " collapsed";
            throw DegenerateGeometry(os.str());
        }
        g.edge_len[a] = len;
        g.unit[a] = d / len;
    }
    return g;
}

std::vector<double> arclength_weights(const RingGeometry& g, int n) {
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = 0.5 * (g.edge_len[j] + g.edge_len[(j + n - 1) % n]);
    return w;
}

template <int D>
VectorXd rhs_regularized_impl(const MrsSystem& sys, const VectorXd& x) {
    const int n = sys.n_markers();
    const double eps = sys.kernel.epsilon;
    const VectorXd f = force_density(sys, x);
    const VectorXd w = marker_weights(sys, x);

    using MapC = Eigen::Map<const Eigen::Matrix<double, D, Eigen::Dynamic>>;
    using MapM = Eigen::Map<Eigen::Matrix<double, D, Eigen::Dynamic>>;
    MapC X(x.data(), D, n);
    MapC F(f.data(), D, n);
    VectorXd out = VectorXd::Zero(x.size());
    MapM V(out.data(), D, n);

    const Mat<D> self = stokeslet_regularized<D>(Vec<D>::Zero(), eps);
    for (int k = 0; k < n; ++k) V.col(k) += self * (w[k] * F.col(k));
    for (int k = 0; k < n; ++k) {
        for (int j = k + 1; j < n; ++j) {
            const Vec<D> r = X.col(k) - X.col(j);
            const Mat<D> U = stokeslet_regularized<D>(r, eps);
            V.col(k) += U * (w[j] * F.col(j));
            V.col(j) += U * (w[k] * F.col(k));
        }
    }
    out += external_velocity(sys.field, D, x);
    return out;
}

template <int D>
VectorXd rhs_singular_impl(const MrsSystem& sys, const VectorXd& x) {
    const int n = sys.n_markers();
    const VectorXd f = force_density(sys, x);
    const VectorXd w = marker_weights(sys, x);

    using MapC = Eigen::Map<const Eigen::Matrix<double, D, Eigen::Dynamic>>;
    using MapM = Eigen::Map<Eigen::Matrix<double, D, Eigen::Dynamic>>;
    MapC X(x.data(), D, n);
    MapC F(f.data(), D, n);
    VectorXd out = VectorXd::Zero(x.size());
    MapM V(out.data(), D, n);

    for (int k = 0; k < n; ++k) {
        for (int j = k + 1; j < n; ++j) {
            const Vec<D> r = X.col(k) - X.col(j);
            const Mat<D> U = stokeslet_singular<D>(r);
            V.col(k) += U * (w[j] * F.col(j));
            V.col(j) += U * (w[k] * F.col(k));
        }
    }
    out += external_velocity(sys.field, D, x);
    return out;
}

// weight-variation scalars dws[j] = d/ds w_j(x + s y) at s = 0, arclength mode
std::vector<double> weight_directional(const RingGeometry& g, int dim, int n,
                                       const VectorXd& y) {
    std::vector<double> ds(n);
    for (int a = 0; a < n; ++a) {
        const int b = (a + 1) % n;
        ds[a] = g.unit[a].dot(y.segment(dim * b, dim) - y.segment(dim * a, dim));
    }
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) out[j] = 0.5 * (ds[j] + ds[(j + n - 1) % n]);
    return out;
}

template <int D>
VectorXd frechet_apply_impl(const MrsSystem& sys, const VectorXd& x, const VectorXd& y) {
    const int n = sys.n_markers();
    const double eps = sys.kernel.epsilon;
    const VectorXd f = force_density(sys, x);
    const VectorXd w = marker_weights(sys, x);
    const VectorXd jy = force_jacobian_apply(sys, x, y);

    // source carried through the kernel: (DF y)_j w_j + F_j dw_j(y)
    VectorXd src = jy;
    for (int j = 0; j < n; ++j) src.segment(D * j, D) *= w[j];
    if (sys.weight_mode == WeightMode::closed_loop_arclength) {
        const RingGeometry g = ring_geometry(D, n, x);
        const std::vector<double> dw = weight_directional(g, D, n, y);
        for (int j = 0; j < n; ++j) src.segment(D * j, D) += dw[j] * f.segment(D * j, D);
    }

    using MapC = Eigen::Map<const Eigen::Matrix<double, D, Eigen::Dynamic>>;
    using MapM = Eigen::Map<Eigen::Matrix<double, D, Eigen::Dynamic>>;
    MapC X(x.data(), D, n);
    MapC Y(y.data(), D, n);
    MapC F(f.data(), D, n);
    MapC B(src.data(), D, n);
    VectorXd out = VectorXd::Zero(x.size());
    MapM V(out.data(), D, n);

    const Mat<D> self = stokeslet_regularized<D>(Vec<D>::Zero(), eps);
    for (int k = 0; k < n; ++k) V.col(k) += self * B.col(k);
    for (int k = 0; k < n; ++k) {
        for (int j = k + 1; j < n; ++j) {
            const Vec<D> r = X.col(k) - X.col(j);
            const Mat<D> U = stokeslet_regularized<D>(r, eps);
            V.col(k) += U * B.col(j);
            V.col(j) += U * B.col(k);
            // gradient contracted with (y_k - y_j); identical for both
            // directions because grad U is odd and the direction flips too
            const Mat<D> G = stokeslet_regularized_gradient<D>(r, eps).contract(Y.col(k) - Y.col(j));
            V.col(k) += G * (w[j] * F.col(j));
            V.col(j) += G * (w[k] * F.col(k));
        }
    }
    if (sys.field.kind == ExternalField::Kind::linear_flow)
        out += external_velocity(sys.field, D, y);
    return out;
}

template <int D>
VectorXd adjoint_apply_impl(const MrsSystem& sys, const VectorXd& x, const VectorXd& phi) {
    const int n = sys.n_markers();
    const double eps = sys.kernel.epsilon;
    const VectorXd f = force_density(sys, x);
    const VectorXd w = marker_weights(sys, x);

    using MapC = Eigen::Map<const Eigen::Matrix<double, D, Eigen::Dynamic>>;
    using MapM = Eigen::Map<Eigen::Matrix<double, D, Eigen::Dynamic>>;
    MapC X(x.data(), D, n);
    MapC F(f.data(), D, n);
    MapC P(phi.data(), D, n);

    // v_j = sum_k U(x_j - x_k) phi_k, self term included
    VectorXd vbuf = VectorXd::Zero(x.size());
    MapM Vv(vbuf.data(), D, n);
    const Mat<D> self = stokeslet_regularized<D>(Vec<D>::Zero(), eps);
    for (int k = 0; k < n; ++k) Vv.col(k) += self * P.col(k);

    VectorXd out = VectorXd::Zero(x.size());
    MapM O(out.data(), D, n);

    for (int a = 0; a < n; ++a) {
        for (int j = a + 1; j < n; ++j) {
            const Vec<D> r = X.col(a) - X.col(j);
            const Mat<D> U = stokeslet_regularized<D>(r, eps);
            Vv.col(a) += U * P.col(j);
            Vv.col(j) += U * P.col(a);
            const KernelGradient<D> G = stokeslet_regularized_gradient<D>(r, eps);
            const Vec<D> fj = w[j] * F.col(j);
            const Vec<D> fa = w[a] * F.col(a);
            for (int m = 0; m < D; ++m) {
                const double Am = P.col(a).dot(G.d[m] * fj) + P.col(j).dot(G.d[m] * fa);
                O(m, a) += Am;
                O(m, j) -= Am;
            }
        }
    }

    // transpose of the force-jacobian path; the jacobian is self-adjoint
    VectorXd wv = vbuf;
    for (int j = 0; j < n; ++j) wv.segment(D * j, D) *= w[j];
    out += force_jacobian_apply(sys, x, wv);

    if (sys.weight_mode == WeightMode::closed_loop_arclength) {
        const RingGeometry g = ring_geometry(D, n, x);
        std::vector<double> c(n);
        for (int j = 0; j < n; ++j) c[j] = F.col(j).dot(Vv.col(j));
        for (int a = 0; a < n; ++a) {
            const int b = (a + 1) % n;
            const double coeff = 0.5 * (c[a] + c[b]);
            O.col(b) += coeff * g.unit[a];
            O.col(a) -= coeff * g.unit[a];
        }
    }

    if (sys.field.kind == ExternalField::Kind::linear_flow)
        out += external_adjoint_apply(sys.field, D, phi);
    return out;
}

template <int D>
VectorXd mobility_difference_impl(const MrsSystem& sys, const VectorXd& x, bool include_self) {
    const int n = sys.n_markers();
    const double eps = sys.kernel.epsilon;
    const VectorXd f = force_density(sys, x);
    const VectorXd w = marker_weights(sys, x);

    using MapC = Eigen::Map<const Eigen::Matrix<double, D, Eigen::Dynamic>>;
    using MapM = Eigen::Map<Eigen::Matrix<double, D, Eigen::Dynamic>>;
    MapC X(x.data(), D, n);
    MapC F(f.data(), D, n);
    VectorXd out = VectorXd::Zero(x.size());
    MapM V(out.data(), D, n);

    if (include_self) {
        const Mat<D> self = stokeslet_regularized<D>(Vec<D>::Zero(), eps);
        for (int k = 0; k < n; ++k) V.col(k) += self * (w[k] * F.col(k));
    }
    for (int k = 0; k < n; ++k) {
        for (int j = k + 1; j < n; ++j) {
            const Vec<D> r = X.col(k) - X.col(j);
            const Mat<D> dU = stokeslet_regularized<D>(r, eps) - stokeslet_singular<D>(r);
            V.col(k) += dU * (w[j] * F.col(j));
            V.col(j) += dU * (w[k] * F.col(k));
        }
    }
    return out;
}

} // namespace

VectorXd marker_weights(const MrsSystem& sys, const VectorXd& x) {
    const int n = sys.n_markers();
    if (sys.weight_mode == WeightMode::constant) {
        if (sys.weights.size() != n) throw ConfigError("weights size does not match marker count");
        return sys.weights;
    }
    const RingGeometry g = ring_geometry(sys.dimension(), n, x);
    const std::vector<double> w = arclength_weights(g, n);
    return Eigen::Map<const VectorXd>(w.data(), n);
}

VectorXd rhs_regularized(const MrsSystem& sys, double, const VectorXd& x) {
    return sys.dimension() == 2 ? rhs_regularized_impl<2>(sys, x) : rhs_regularized_impl<3>(sys, x);
}

VectorXd rhs_singular(const MrsSystem& sys, double, const VectorXd& x) {
    return sys.dimension() == 2 ? rhs_singular_impl<2>(sys, x) : rhs_singular_impl<3>(sys, x);
}

VectorXd frechet_apply(const MrsSystem& sys, double, const VectorXd& x, const VectorXd& y) {
    return sys.dimension() == 2 ? frechet_apply_impl<2>(sys, x, y) : frechet_apply_impl<3>(sys, x, y);
}

VectorXd adjoint_apply(const MrsSystem& sys, double, const VectorXd& x, const VectorXd& phi) {
    return sys.dimension() == 2 ? adjoint_apply_impl<2>(sys, x, phi)
                                : adjoint_apply_impl<3>(sys, x, phi);
}

VectorXd mobility_difference(const MrsSystem& sys, const VectorXd& x, bool include_self) {
    return sys.dimension() == 2 ? mobility_difference_impl<2>(sys, x, include_self)
                                : mobility_difference_impl<3>(sys, x, include_self);
}

VectorXd mobility_difference_magnitude(const MrsSystem& sys, const VectorXd& x, bool include_self) {
    const VectorXd d = mobility_difference(sys, x, include_self);
    const int dim = sys.dimension();
    const int n = sys.n_markers();
    VectorXd out(n);
    for (int k = 0; k < n; ++k) out[k] = d.segment(dim * k, dim).norm();
    return out;
}

} // namespace stokesim
