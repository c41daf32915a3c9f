#pragma once

// Canned problem setups:
//
//   circle_relax   a deformed closed loop of springs relaxing toward a circle,
//                  optionally tethered to its rest shape
//   circle_shear   a circular loop driven by a linear shear flow
//   fiber_network  a random 3D spring network settling under gravity
//
// Each produces a ready-to-run MrsSystem plus its initial marker positions.

#include <cstdint>
#include <string>
#include <vector>

#include "stokesim/dynamics.hpp"

namespace stokesim {

enum class ScenarioKind { circle_relax, circle_shear, fiber_network };

ScenarioKind scenario_by_name(const std::string& name);
std::string scenario_name(ScenarioKind kind);
const std::vector<std::string>& scenario_names();

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::circle_relax;
    int n_markers = 64;       // ring size, or fiber count
    double epsilon = 0.05;
    double stiffness = 1.0;   // spring constant; fiber networks scale it by length^2
    double shear_rate = 1.0;  // circle_shear only
    double tether_stiffness = 0.0; // circle_relax only, 0 disables the tether
    double r_connect = 0.35;  // fiber_network: connect pairs closer than this
    double box_size = 1.0;    // fiber_network: points drawn uniformly in [0, box]^3
    double gravity = 1.0;     // fiber_network: magnitude of the -z body force
    uint64_t seed = 2024;     // fiber_network placement
};

struct ScenarioInstance {
    MrsSystem system;
    VectorXd x0;
};

ScenarioInstance make_scenario(const ScenarioConfig& cfg);

// the perturbed loop used by circle_relax, parameter s in [0, 2)
Vec2 deformed_circle_point(double s);

// log2 ratio of successive errors, the observed order under halving
double convergence_factor(double err_coarse, double err_fine);

} // namespace stokesim
