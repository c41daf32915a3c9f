#include "stokesim/scenarios.hpp"

#include <cmath>

#include "stokesim/errors.hpp"
#include "stokesim/rng.hpp"

namespace stokesim {

namespace {

SpringNetwork ring_network(int n, double stiffness, double rest_length) {
    SpringNetwork net;
    net.n_points = n;
    net.edges.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
        net.edges.push_back(SpringEdge{k, (k + 1) % n, stiffness, rest_length});
    return net;
}

ScenarioInstance make_circle(const ScenarioConfig& cfg, bool sheared) {
    if (cfg.n_markers < 3) throw ConfigError("circle scenarios need at least 3 markers");
    if (!(cfg.stiffness > 0.0)) throw ConfigError("stiffness must be positive");
    const int n = cfg.n_markers;
    const double rest = 2.0 * std::sin(M_PI / n);

    ScenarioInstance inst;
    inst.system.kernel.dimension = 2;
    inst.system.kernel.epsilon = cfg.epsilon;
    inst.system.network = ring_network(n, cfg.stiffness, rest);
    inst.system.weight_mode = WeightMode::closed_loop_arclength;

    inst.x0.resize(2 * n);
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k / n;
        const Vec2 p = sheared ? Vec2(std::cos(M_PI * s), std::sin(M_PI * s))
                               : deformed_circle_point(s);
        inst.x0.segment<2>(2 * k) = p;
    }

    if (sheared) {
        Tensor2 c = Tensor2::Zero();
        c(0, 1) = cfg.shear_rate;
        inst.system.field = ExternalField::linear_flow(c);
    } else if (cfg.tether_stiffness != 0.0) {
        if (!(cfg.tether_stiffness > 0.0))
            throw ConfigError("tether_stiffness must be nonnegative");
        TetherConfig tether;
        tether.stiffness = cfg.tether_stiffness;
        tether.reference.resize(2 * n);
        for (int k = 0; k < n; ++k) {
            const double a = 2.0 * M_PI * k / n;
            tether.reference.segment<2>(2 * k) = Vec2(std::cos(a), std::sin(a));
        }
        inst.system.tether = tether;
    }

    validate(inst.system);
    return inst;
}

ScenarioInstance make_fibers(const ScenarioConfig& cfg) {
    if (cfg.n_markers < 2) throw ConfigError("fiber_network needs at least 2 markers");
    if (!(cfg.box_size > 0.0)) throw ConfigError("box_size must be positive");
    if (!(cfg.r_connect > 0.0)) throw ConfigError("r_connect must be positive");
    if (!(cfg.stiffness > 0.0)) throw ConfigError("stiffness must be positive");
    const int n = cfg.n_markers;

    ScenarioInstance inst;
    inst.system.kernel.dimension = 3;
    inst.system.kernel.epsilon = cfg.epsilon;

    Rng rng(cfg.seed);
    inst.x0.resize(3 * n);
    for (int k = 0; k < 3 * n; ++k) inst.x0[k] = cfg.box_size * rng.uniform01();

    SpringNetwork net;
    net.n_points = n;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double len = (inst.x0.segment<3>(3 * i) - inst.x0.segment<3>(3 * j)).norm();
            if (len <= cfg.r_connect && len > 0.0)
                net.edges.push_back(SpringEdge{i, j, cfg.stiffness * len * len, len});
        }
    }
    inst.system.network = net;

    inst.system.weight_mode = WeightMode::constant;
    inst.system.weights = VectorXd::Ones(n);
    inst.system.field = ExternalField::uniform_gravity(Vec3(0.0, 0.0, -cfg.gravity));

    validate(inst.system);
    return inst;
}

} // namespace

ScenarioKind scenario_by_name(const std::string& name) {
    if (name == "circle_relax") return ScenarioKind::circle_relax;
    if (name == "circle_shear") return ScenarioKind::circle_shear;
    if (name == "fiber_network") return ScenarioKind::fiber_network;
    throw ConfigError("unknown scenario '" + name + "'");
}

std::string scenario_name(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::circle_relax: return "circle_relax";
        case ScenarioKind::circle_shear: return "circle_shear";
        case ScenarioKind::fiber_network: return "fiber_network";
    }
    throw ConfigError("unknown scenario kind");
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"circle_relax", "circle_shear",
                                                   "fiber_network"};
    return names;
}

ScenarioInstance make_scenario(const ScenarioConfig& cfg) {
    if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    switch (cfg.kind) {
        case ScenarioKind::circle_relax: return make_circle(cfg, false);
        case ScenarioKind::circle_shear: return make_circle(cfg, true);
        case ScenarioKind::fiber_network: return make_fibers(cfg);
    }
    throw ConfigError("unknown scenario kind");
}

Vec2 deformed_circle_point(double s) {
    const double x = std::cos(M_PI * s) + 0.5 * std::sin(2.0 * M_PI * std::cos(M_PI * (s - 1.0)));
    return Vec2(x, std::sin(M_PI * s));
}

double convergence_factor(double err_coarse, double err_fine) {
    const double ec = std::abs(err_coarse);
    const double ef = std::abs(err_fine);
    if (!(ec > 0.0) || !(ef > 0.0))
        throw NumericalError("convergence_factor: errors must be nonzero");
    return std::log2(ec / ef);
}

} // namespace stokesim
