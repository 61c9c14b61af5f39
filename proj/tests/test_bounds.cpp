#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kppfront/bounds.hpp"
#include "kppfront/errors.hpp"
#include "kppfront/solver.hpp"

using namespace kppfront;

namespace {

struct Case {
    ModelParams p;
    SpectralRoots roots;
    GridSpec grid;
    OperatorConfig cfg;
};

Case setup(double b, double tau, double c, int m = 16) {
    Case k{ModelParams::make(b, tau, c), {}, {}, {}};
    k.roots = spectral_roots(k.p);
    k.grid = GridSpec::symmetric(default_half_width(k.roots), k.p.ctau, m);
    k.cfg = make_operator_config(k.p, m);
    return k;
}

}  // namespace

TEST_CASE("super-solution matching") {
    for (auto [b, tau, c] : {std::tuple{0.2, 0.2, 3.0}, std::tuple{0.4, 0.1, 4.0}, std::tuple{0.0, 0.3, 2.5}}) {
        const Case k = setup(b, tau, c);
        const SuperBuild s = build_super(k.roots, k.p, k.grid);
        CHECK(s.fn.zeta > 0.0);
        CHECK(s.fn.a > 0.0);
        CHECK(s.fn.value_mismatch() <= 1e-12);
        CHECK(s.fn.slope_mismatch() <= 1e-12);
        // Gap inequality 1 - e^{mu1 t} < a e^{lambda2 t} left of zeta.
        for (int i = 1; i <= 1000; ++i) {
            const double t = s.fn.zeta - 40.0 * i / 1000.0;
            CHECK(-std::expm1(s.fn.mu1 * t) < s.fn.a * std::exp(s.fn.lambda2 * t));
        }
        double min_fd = 1.0;
        for (std::size_t i = 0; i + 1 < s.grid.size(); ++i) min_fd = std::min(min_fd, s.grid.values[i + 1] - s.grid.values[i]);
        CHECK(min_fd >= 0.0);
        CHECK(s.grid.values.front() < 1e-6);
        CHECK(s.grid.values.back() > 1.0 - 1e-6);
    }
}

TEST_CASE("sub-solution construction") {
    const Case k = setup(0.2, 0.2, 3.0);
    const SuperBuild sup = build_super(k.roots, k.p, k.grid);
    const SubBuild sub = build_sub(sup.fn, k.roots, k.p, k.grid);
    CHECK(sub.fn.eps > 0.0);
    CHECK(sub.fn.eps < *k.roots.lambda2);
    CHECK(sub.fn.M >= 2.0);
    CHECK(sub.fn.chi0_at_shifted <= -kChi0Margin);
    CHECK(sub.fn.margin > 0.0);
    CHECK(sub.fn(sub.fn.xi) == 0.0);
    CHECK(std::abs(sub.fn(sub.fn.xi - 1e-9)) < 1e-8);
    // Corner: left slope negative, right slope zero.
    const double h = 1e-6;
    CHECK((sub.fn(sub.fn.xi) - sub.fn(sub.fn.xi - h)) / h < 0.0);
    for (std::size_t i = 0; i < sub.grid.size(); ++i) {
        CHECK(sub.grid.values[i] >= 0.0);
        CHECK(sub.grid.values[i] < sup.grid.values[i]);
    }
}

TEST_CASE("missing roots are rejected") {
    const auto p = ModelParams::make(0.0, 0.3, 2.0);  // critical speed
    const auto roots = spectral_roots(p);
    const auto grid = GridSpec::symmetric(10.0, p.ctau, 16);
    CHECK_THROWS_AS(build_super(roots, p, grid), ValidationError);
    const auto q = ModelParams::make(0.0, 0.3, 1.5);
    CHECK_THROWS_AS(build_super(spectral_roots(q), q, grid), ValidationError);
}

TEST_CASE("residual of the equilibria") {
    const Case k = setup(0.2, 0.2, 3.0);
    GridProfile zero;
    zero.t_start = k.grid.t_start;
    zero.dt = k.grid.dt;
    zero.m = k.grid.m;
    zero.values.assign(k.grid.n, 0.0);
    for (double v : residual_pew(zero, k.cfg).values) CHECK(v == 0.0);
    GridProfile one = zero;
    one.values.assign(k.grid.n, 1.0);
    one.right_value = 1.0;
    for (double v : residual_pew(one, k.cfg).values) CHECK(std::abs(v) <= 2.0 * k.p.trunc_tol / 0.64);
}

TEST_CASE("fourth-order stencil is exact on quartics") {
    GridProfile g;
    g.t_start = -1.0;
    g.dt = 0.1;
    g.m = 1;
    for (int i = 0; i < 21; ++i) {
        const double t = g.t(i);
        g.values.push_back(t * t * t * t - 2 * t * t * t + t);
    }
    std::vector<double> d1, d2;
    grid_derivatives(g, Stencil::fourth_order, d1, d2);
    for (int i = 2; i < 19; ++i) {
        const double t = g.t(i);
        CHECK(d1[i] == doctest::Approx(4 * t * t * t - 6 * t * t + 1).epsilon(1e-10));
        CHECK(d2[i] == doctest::Approx(12 * t * t - 12 * t).epsilon(1e-9));
    }
}

TEST_CASE("differential inequalities on the grid") {
    for (auto [b, tau, c] : {std::tuple{0.2, 0.2, 3.0}, std::tuple{0.4, 0.1, 4.0}}) {
        CAPTURE(b);
        const Case k = setup(b, tau, c);
        const SuperBuild sup = build_super(k.roots, k.p, k.grid);
        const SubBuild sub = build_sub(sup.fn, k.roots, k.p, k.grid);
        const double tol_sup = sign_tolerance(k.grid.dt, sup.fn.derivative_bound(), c);
        const double tol_sub = sign_tolerance(k.grid.dt, sub.fn.derivative_bound(), c);
        const auto rs = residual_pew(sup.grid, k.cfg);
        const auto rb = residual_pew(sub.grid, k.cfg);
        for (std::size_t i = 0; i < k.grid.n; ++i) {
            const double t = sup.grid.t(static_cast<std::ptrdiff_t>(i));
            if (std::abs(t - sup.fn.zeta) > 2 * k.grid.dt) CHECK(rs.values[i] <= tol_sup);
            if (std::abs(t - sub.fn.xi) > 2 * k.grid.dt) CHECK(rb.values[i] >= -tol_sub);
        }
    }
}
