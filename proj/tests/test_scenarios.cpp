#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stokesim/scenarios.hpp"

using namespace stokesim;

TEST_CASE("scenario names round-trip") {
    for (const std::string& name : scenario_names())
        CHECK(scenario_name(scenario_by_name(name)) == name);
    CHECK_THROWS_AS((void)scenario_by_name("bogus"), ConfigError);
}

TEST_CASE("deformed circle passes through its anchor points") {
    const Vec2 p0 = deformed_circle_point(0.0);
    CHECK(p0[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p0[1] == doctest::Approx(0.0).epsilon(1e-14));
    const Vec2 p1 = deformed_circle_point(0.5);
    CHECK(p1[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p1[1] == doctest::Approx(1.0).epsilon(1e-14));
    // parameter is 2-periodic: s and s + 2 give the same point
    const Vec2 a = deformed_circle_point(0.37);
    const Vec2 b = deformed_circle_point(2.37);
    CHECK((a - b).norm() < 1e-12);
}

TEST_CASE("relaxation scenario builds a closed deformed ring") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::circle_relax;
    cfg.n_markers = 24;
    cfg.epsilon = 0.07;
    cfg.stiffness = 2.0;
    const ScenarioInstance inst = make_scenario(cfg);

    CHECK(inst.system.dimension() == 2);
    CHECK(inst.system.n_markers() == 24);
    CHECK(inst.system.weight_mode == WeightMode::closed_loop_arclength);
    CHECK(inst.system.kernel.epsilon == 0.07);
    CHECK(!inst.system.tether.has_value());
    CHECK(inst.system.field.kind == ExternalField::Kind::none);

    REQUIRE(int(inst.system.network.edges.size()) == 24);
    const double rest = 2.0 * std::sin(M_PI / 24);
    for (int k = 0; k < 24; ++k) {
        const SpringEdge& e = inst.system.network.edges[size_t(k)];
        CHECK(e.a == k);
        CHECK(e.b == (k + 1) % 24);
        CHECK(e.stiffness == 2.0);
        CHECK(e.rest_length == doctest::Approx(rest).epsilon(1e-15));
    }
    // markers sit on the deformed loop
    const Vec2 first(inst.x0[0], inst.x0[1]);
    CHECK((first - deformed_circle_point(0.0)).norm() < 1e-14);
    const Vec2 sixth(inst.x0[2 * 6], inst.x0[2 * 6 + 1]);
    CHECK((sixth - deformed_circle_point(2.0 * 6 / 24)).norm() < 1e-14);
}

TEST_CASE("relaxation tether anchors to the resting circle") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::circle_relax;
    cfg.n_markers = 16;
    cfg.tether_stiffness = 0.5;
    const ScenarioInstance inst = make_scenario(cfg);
    REQUIRE(inst.system.tether.has_value());
    CHECK(inst.system.tether->stiffness == 0.5);
    for (int k = 0; k < 16; ++k) {
        const double a = 2.0 * M_PI * k / 16;
        CHECK(inst.system.tether->reference[2 * k] == doctest::Approx(std::cos(a)).epsilon(1e-14));
        CHECK(inst.system.tether->reference[2 * k + 1] ==
              doctest::Approx(std::sin(a)).epsilon(1e-14));
    }
}

TEST_CASE("shear scenario starts circular inside a linear shear flow") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::circle_shear;
    cfg.n_markers = 20;
    cfg.shear_rate = 0.8;
    const ScenarioInstance inst = make_scenario(cfg);

    CHECK(inst.system.field.kind == ExternalField::Kind::linear_flow);
    CHECK(inst.system.field.flow(0, 1) == 0.8);
    CHECK(inst.system.field.flow(0, 0) == 0.0);
    CHECK(inst.system.field.flow(1, 0) == 0.0);
    CHECK(inst.system.field.flow(1, 1) == 0.0);
    for (int k = 0; k < 20; ++k) {
        const Vec2 p(inst.x0[2 * k], inst.x0[2 * k + 1]);
        CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
    // springs start exactly at rest on the unit-circle polygon
    const double rest = 2.0 * std::sin(M_PI / 20);
    const Vec2 p0(inst.x0[0], inst.x0[1]);
    const Vec2 p1(inst.x0[2], inst.x0[3]);
    CHECK((p0 - p1).norm() == doctest::Approx(rest).epsilon(1e-13));
}

TEST_CASE("fiber network connects neighbors and scales stiffness by length") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::fiber_network;
    cfg.n_markers = 40;
    cfg.r_connect = 0.4;
    cfg.box_size = 1.0;
    cfg.stiffness = 3.0;
    cfg.seed = 77;
    const ScenarioInstance inst = make_scenario(cfg);

    CHECK(inst.system.dimension() == 3);
    CHECK(inst.system.weight_mode == WeightMode::constant);
    CHECK(inst.system.weights.size() == 40);
    CHECK(inst.system.weights.minCoeff() == 1.0);
    CHECK(inst.system.weights.maxCoeff() == 1.0);
    CHECK(inst.system.field.kind == ExternalField::Kind::gravity);
    CHECK(inst.system.field.gravity[2] == -1.0);

    REQUIRE(!inst.system.network.edges.empty());
    for (const SpringEdge& e : inst.system.network.edges) {
        const Vec3 d = inst.x0.segment<3>(3 * e.a) - inst.x0.segment<3>(3 * e.b);
        CHECK(d.norm() <= 0.4 + 1e-12);
        CHECK(e.rest_length == doctest::Approx(d.norm()).epsilon(1e-14));
        CHECK(e.stiffness ==
              doctest::Approx(3.0 * e.rest_length * e.rest_length).epsilon(1e-13));
    }
    // all markers inside the box
    CHECK(inst.x0.minCoeff() >= 0.0);
    CHECK(inst.x0.maxCoeff() <= 1.0);
}

TEST_CASE("fiber network placement is seed-deterministic") {
    ScenarioConfig cfg;
    cfg.kind = ScenarioKind::fiber_network;
    cfg.n_markers = 25;
    cfg.seed = 5;
    const ScenarioInstance a = make_scenario(cfg);
    const ScenarioInstance b = make_scenario(cfg);
    CHECK((a.x0 - b.x0).norm() == 0.0);
    CHECK(a.system.network.edges.size() == b.system.network.edges.size());

    cfg.seed = 6;
    const ScenarioInstance c = make_scenario(cfg);
    CHECK((a.x0 - c.x0).norm() > 1e-3);
}

TEST_CASE("scenario validation rejects bad parameters") {
    ScenarioConfig cfg;
    cfg.n_markers = 2;
    CHECK_THROWS_AS((void)make_scenario(cfg), ConfigError);
    cfg.n_markers = 16;
    cfg.epsilon = 0.0;
    CHECK_THROWS_AS((void)make_scenario(cfg), ConfigError);
    cfg.epsilon = 0.1;
    cfg.stiffness = -1.0;
    CHECK_THROWS_AS((void)make_scenario(cfg), ConfigError);
}

TEST_CASE("convergence factor reports halving ratios") {
    CHECK(convergence_factor(4.0, 1.0) == doctest::Approx(2.0));
    CHECK(convergence_factor(1.0, 1.0 / 64.0) == doctest::Approx(6.0));
    CHECK(convergence_factor(-4.0, -1.0) == doctest::Approx(2.0)); // signs ignored
    CHECK_THROWS_AS((void)convergence_factor(0.0, 1.0), NumericalError);
    CHECK_THROWS_AS((void)convergence_factor(1.0, 0.0), NumericalError);
}
