#include "stokesim/forces.hpp"

#include <cmath>
#include <sstream>

namespace stokesim {

void validate(const SpringNetwork& net) {
    if (net.n_points < 0) throw ConfigError("spring network: negative point count");
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const auto& ed = net.edges[e];
        std::ostringstream at;
        at << "spring network edge " << e << ": ";
        if (ed.a < 0 || ed.a >= net.n_points || ed.b < 0 || ed.b >= net.n_points)
            throw ConfigError(at.str() + "endpoint out of range");
        if (ed.a == ed.b) throw ConfigError(at.str() + "self loop");
        if (!(ed.rest_length > 0.0)) throw ConfigError(at.str() + "rest length must be positive");
        if (!(ed.stiffness >= 0.0)) throw ConfigError(at.str() + "negative stiffness");
    }
}

ExternalField ExternalField::linear_flow(const MatrixXd& c) {
    if (c.rows() != c.cols() || (c.rows() != 2 && c.rows() != 3))
        throw ConfigError("linear flow matrix must be 2x2 or 3x3");
    ExternalField f;
    f.kind = Kind::linear_flow;
    f.flow = c;
    return f;
}

ExternalField ExternalField::uniform_gravity(const VectorXd& g) {
    if (g.size() != 2 && g.size() != 3)
        throw ConfigError("gravity vector must have 2 or 3 components");
    ExternalField f;
    f.kind = Kind::gravity;
    f.gravity = g;
    return f;
}

namespace {

// shared edge geometry; throws when endpoints collapse
struct EdgeGeom {
    double len;
    VectorXd unit; // from b toward a
};

EdgeGeom edge_geometry(const SpringEdge& ed, int dim, const VectorXd& x, std::size_t index) {
    VectorXd d = x.segment(dim * ed.a, dim) - x.segment(dim * ed.b, dim);
    const double len = d.norm();
    if (!(len > 1e-14 * ed.rest_length)) {
        std::ostringstream os;
        os << "spring edge " << index << " (" << ed.a << "," << ed.b
           << ") collapsed: separation " << len << " vs rest " << ed.rest_length;
        throw DegenerateGeometry(os.str());
    }
    return {len, d / len};
}

} // namespace

VectorXd spring_forces(const SpringNetwork& net, int dim, const VectorXd& x) {
    VectorXd f = VectorXd::Zero(x.size());
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const auto& ed = net.edges[e];
        const EdgeGeom g = edge_geometry(ed, dim, x, e);
        const double mag = ed.stiffness * (g.len / ed.rest_length - 1.0);
        const VectorXd fe = mag * g.unit; // pulls b toward a when stretched
        f.segment(dim * ed.b, dim) += fe;
        f.segment(dim * ed.a, dim) -= fe;
    }
    return f;
}

VectorXd spring_jacobian_apply(const SpringNetwork& net, int dim, const VectorXd& x,
                               const VectorXd& y) {
    VectorXd out = VectorXd::Zero(x.size());
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const auto& ed = net.edges[e];
        const EdgeGeom g = edge_geometry(ed, dim, x, e);
        const VectorXd dy = y.segment(dim * ed.a, dim) - y.segment(dim * ed.b, dim);
        const double along = g.unit.dot(dy);
        // k[(1/rest - 1/len)(I - tt) + (1/rest) tt] dy
        const VectorXd block = ed.stiffness * ((1.0 / ed.rest_length - 1.0 / g.len) * (dy - along * g.unit)
                                               + (along / ed.rest_length) * g.unit);
        out.segment(dim * ed.b, dim) += block;
        out.segment(dim * ed.a, dim) -= block;
    }
    return out;
}

VectorXd tether_forces(const TetherConfig& tether, const VectorXd& x) {
    if (tether.reference.size() != x.size())
        throw ConfigError("tether reference size does not match state size");
    return -tether.stiffness * (x - tether.reference);
}

VectorXd external_velocity(const ExternalField& field, int dim, const VectorXd& x) {
    VectorXd u = VectorXd::Zero(x.size());
    if (field.kind != ExternalField::Kind::linear_flow) return u;
    if (field.flow.rows() != dim) throw ConfigError("flow matrix dimension mismatch");
    const int n = static_cast<int>(x.size()) / dim;
    for (int k = 0; k < n; ++k)
        u.segment(dim * k, dim) = field.flow * x.segment(dim * k, dim);
    return u;
}

VectorXd external_adjoint_apply(const ExternalField& field, int dim, const VectorXd& phi) {
    VectorXd out = VectorXd::Zero(phi.size());
    if (field.kind != ExternalField::Kind::linear_flow) return out;
    if (field.flow.rows() != dim) throw ConfigError("flow matrix dimension mismatch");
    const int n = static_cast<int>(phi.size()) / dim;
    for (int k = 0; k < n; ++k)
        out.segment(dim * k, dim) = field.flow.transpose() * phi.segment(dim * k, dim);
    return out;
}

} // namespace stokesim
