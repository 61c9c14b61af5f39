#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kppfront/errors.hpp"
#include "kppfront/evolver.hpp"
#include "kppfront/solver.hpp"

using namespace kppfront;

TEST_CASE("stable time step divides tau") {
    const double dt = stable_time_step(0.2, 0.05);
    CHECK(dt <= 0.5 * 0.05 * 0.05);
    CHECK(std::abs(0.2 / dt - std::round(0.2 / dt)) < 1e-9);
}

TEST_CASE("equilibrium 1 stays 1") {
    const auto p = ModelParams::make(0.3, 0.2, 3.0);
    const double dt = stable_time_step(p.tau, 0.1);
    NeutralEvolver ev(p, -5.0, 0.1, 101, dt, [](double, double) { return 1.0; }, 1.0, 1.0);
    for (int i = 0; i < 500; ++i) ev.step();
    for (double v : ev.u()) CHECK(v == 1.0);
    for (double v : ev.v()) CHECK(v == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("invalid steps are rejected") {
    const auto p = ModelParams::make(0.3, 0.2, 3.0);
    auto hist = [](double, double) { return 0.0; };
    CHECK_THROWS_AS(NeutralEvolver(p, 0.0, 0.1, 50, 0.006, hist, 0.0, 1.0), ValidationError);  // CFL
    CHECK_THROWS_AS(NeutralEvolver(p, 0.0, 0.1, 50, 0.0049, hist, 0.0, 1.0), ValidationError); // tau/dt
}

TEST_CASE("fronts travel at speed c") {
    for (auto [b, tau, c] : {std::tuple{0.0, 0.3, 2.5}, std::tuple{0.2, 0.2, 3.0}}) {
        CAPTURE(b);
        const auto p = ModelParams::make(b, tau, c);
        const auto rep = solve_front(p);
        REQUIRE(rep.ok());
        const EvolveResult e = evolve(rep.profile_u, p);
        CHECK(std::abs(e.speed / c - 1.0) <= 0.02);
        CHECK(e.shape_error <= 0.02);
        CHECK(e.min_u >= 0.0);
        CHECK(e.max_u <= 1.05);
        CHECK(e.min_boundary_distance >= 10.0);
        for (std::size_t i = 1; i < e.fronts.size(); ++i) CHECK(e.fronts[i].second <= e.fronts[i - 1].second + 1e-12);
    }
}

TEST_CASE("halving dx reduces the shape error") {
    const auto p = ModelParams::make(0.2, 0.2, 3.0);
    const auto rep = solve_front(p);
    EvolveOptions coarse;
    coarse.horizon = 5.0;
    coarse.dx = 0.1;
    EvolveOptions fine = coarse;
    fine.dx = 0.05;
    const double e1 = evolve(rep.profile_u, p, coarse).shape_error;
    const double e2 = evolve(rep.profile_u, p, fine).shape_error;
    CHECK(e1 / e2 >= 1.8);
}

TEST_CASE("short horizons and boundary collisions") {
    const auto p = ModelParams::make(0.2, 0.2, 3.0);
    const auto rep = solve_front(p);
    EvolveOptions o;
    o.horizon = 2.0;
    CHECK_THROWS_AS(evolve(rep.profile_u, p, o), ValidationError);
    o.horizon = 5.0;
    o.right_pad = 5.0;
    CHECK_THROWS_AS(evolve(rep.profile_u, p, o), NumericError);
}
