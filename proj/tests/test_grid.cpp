#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "kppfront/errors.hpp"
#include "kppfront/grid.hpp"

using namespace kppfront;

namespace {

GridProfile make_profile(const OperatorConfig& cfg, double half_width, auto f, double left_rate = 0.0,
                         double right_value = 0.0, LeftTail tail = LeftTail::exponential) {
    const GridSpec s = GridSpec::symmetric(half_width, cfg.params.ctau, cfg.m);
    GridProfile g;
    g.t_start = s.t_start;
    g.dt = s.dt;
    g.m = s.m;
    g.left_rate = left_rate;
    g.right_value = right_value;
    g.left_tail = tail;
    for (std::size_t i = 0; i < s.n; ++i) g.values.push_back(f(g.t(static_cast<std::ptrdiff_t>(i))));
    return g;
}

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

TEST_CASE("GridSpec::symmetric aligns the delay") {
    const GridSpec s = GridSpec::symmetric(60.0, 0.6, 16);
    CHECK(s.dt * 16 == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(s.n % 2 == 1);
    CHECK(-s.t_start >= 60.0 - 1e-9);
    CHECK(std::abs(s.t_start + static_cast<double>(s.n / 2) * s.dt) < 1e-12);
}

TEST_CASE("extensions and interpolation") {
    const auto cfg = make_operator_config(ModelParams::make(0.2, 0.2, 3.0), 16);
    const double lam = 0.7;
    auto g = make_profile(cfg, 5.0, [&](double t) { return std::exp(lam * t); }, lam, 2.0);
    CHECK(g.at(-10) == doctest::Approx(std::exp(lam * g.t(-10))).epsilon(1e-13));
    CHECK(g.at(static_cast<std::ptrdiff_t>(g.size()) + 3) == 2.0);
    CHECK(g.sample(g.t(7)) == g.values[7]);
    CHECK(g.sample(g.t_start - 1.0) == doctest::Approx(std::exp(lam * (g.t_start - 1.0))).epsilon(1e-13));
    const double mid = 0.5 * (g.t(3) + g.t(4));
    CHECK(g.sample(mid) == doctest::Approx(0.5 * (g.values[3] + g.values[4])));
    g.left_tail = LeftTail::zero;
    CHECK(g.at(-1) == 0.0);
}

TEST_CASE("operator closed forms") {
    const double b = 0.2;
    const auto cfg = make_operator_config(ModelParams::make(b, 0.2, 3.0), 16);
    const double ct = cfg.params.ctau;
    SUBCASE("B and L of a constant") {
        const auto one = make_profile(cfg, 10.0, [](double) { return 1.0; }, 0.0, 1.0);
        const auto bg = resolvent_B(one, cfg);
        for (double v : bg.values) CHECK(std::abs(v - 1.0 / (1.0 - b)) <= 2e-14);
        const auto lg = op_L(one, cfg);
        for (double v : lg.values) CHECK(std::abs(v - 1.0 / (1.0 - b)) <= 2e-14);
    }
    SUBCASE("L of an exponential") {
        const double lam = 0.46;
        const auto g = make_profile(cfg, 10.0, [&](double t) { return std::exp(lam * t); }, lam);
        const auto lg = op_L(g, cfg);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double t = g.t(static_cast<std::ptrdiff_t>(i));
            const double want = std::exp(lam * (t - ct)) / (1.0 - b * std::exp(-lam * ct));
            CHECK(std::abs(lg.values[i] - want) <= 1e-13 * want + 1e-14 * std::exp(lam * t));
        }
    }
    SUBCASE("F at the equilibria") {
        const auto zero = make_profile(cfg, 10.0, [](double) { return 0.0; });
        CHECK(sup_abs(op_F(zero, cfg).values) == 0.0);
        const auto one = make_profile(cfg, 10.0, [](double) { return 1.0; }, 0.0, 1.0);
        CHECK(sup_abs(op_F(one, cfg).values) <= 2.0 * cfg.params.trunc_tol / ((1 - b) * (1 - b)));
    }
}

TEST_CASE("b = 0 reduces to the delayed logistic term") {
    const auto cfg = make_operator_config(ModelParams::make(0.0, 0.3, 2.5), 8);
    const auto g = make_profile(cfg, 10.0, [](double t) { return sigmoid(t); }, 1.0, 1.0);
    const auto s = shift(g, cfg);
    const auto l = op_L(g, cfg);
    const auto f = op_F(g, cfg);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(l.values[i] == s.values[i]);
        CHECK(f.values[i] == doctest::Approx(g.values[i] * (1.0 - s.values[i])).epsilon(1e-15));
    }
    CHECK(s.values[8] == g.values[0]);
}

TEST_CASE("linearity, resolvent identity and order preservation") {
    const double b = 0.45;
    const auto cfg = make_operator_config(ModelParams::make(b, 0.3, 2.0), 12);
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a1 = u(rng), a2 = u(rng), k1 = 2.0 * u(rng), k2 = 2.0 * u(rng);
        const auto g = make_profile(cfg, 8.0, [&](double t) { return std::sin(k1 * t) + a1; }, 0.0, 0.3,
                                    LeftTail::zero);
        const auto h = make_profile(cfg, 8.0, [&](double t) { return std::cos(k2 * t) * a2; }, 0.0, -0.2,
                                    LeftTail::zero);
        std::vector<double> mix(g.size());
        for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a1 * g.values[i] + a2 * h.values[i];
        auto gm = g.with_values(mix);
        gm.right_value = a1 * g.right_value + a2 * h.right_value;
        for (auto op : {&shift, &resolvent_B, &op_L}) {
            const auto lhs = op(gm, cfg);
            const auto rg = op(g, cfg);
            const auto rh = op(h, cfg);
            double worst = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < mix.size(); ++i) {
                worst = std::max(worst, std::abs(lhs.values[i] - (a1 * rg.values[i] + a2 * rh.values[i])));
                scale = std::max(scale, std::abs(lhs.values[i]));
            }
            CHECK(worst <= 1e-13 * std::max(scale, 1.0));
        }
        // (I - bS) B g = g.
        const auto bg = resolvent_B(g, cfg);
        const auto sbg = shift(bg, cfg);
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(std::abs(bg.values[i] - b * sbg.values[i] - g.values[i]) <= 10.0 * cfg.params.trunc_tol);
        }
        // g <= g + |h| implies Bg <= B(g + |h|) and Lg <= L(g + |h|).
        auto upper = g;
        for (std::size_t i = 0; i < g.size(); ++i) upper.values[i] += std::abs(h.values[i]);
        upper.right_value += std::abs(h.right_value);
        const auto bu = resolvent_B(upper, cfg);
        const auto lu = op_L(upper, cfg);
        const auto lg = op_L(g, cfg);
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(bg.values[i] <= bu.values[i]);
            CHECK(lg.values[i] <= lu.values[i]);
        }
    }
}

TEST_CASE("qm_defect") {
    const auto cfg = make_operator_config(ModelParams::make(0.2, 0.2, 3.0), 16);
    SUBCASE("identical profiles give exactly zero") {
        const auto g = make_profile(cfg, 20.0, [](double t) { return sigmoid(t); }, 1.0, 1.0);
        CHECK(qm_defect(g, g, cfg) == 0.0);
    }
    SUBCASE("the equilibria") {
        const auto zero = make_profile(cfg, 20.0, [](double) { return 0.0; }, 0.0, 0.0);
        const auto one = make_profile(cfg, 20.0, [](double) { return 1.0; }, 0.0, 1.0);
        CHECK(qm_defect(zero, one, cfg) >= -2.0 * cfg.params.trunc_tol);
    }
    SUBCASE("ordering violations are rejected") {
        const auto lo = make_profile(cfg, 5.0, [](double t) { return 0.5 * sigmoid(t); }, 1.0, 0.5);
        const auto hi = make_profile(cfg, 5.0, [](double t) { return sigmoid(t); }, 1.0, 1.0);
        CHECK_THROWS_AS(qm_defect(hi, lo, cfg), ValidationError);
        auto bad = hi;
        bad.values[3] = 1.5;
        CHECK_THROWS_AS(qm_defect(lo, bad, cfg), ValidationError);
    }
    SUBCASE("random ordered pairs") {
        std::mt19937_64 rng(1000);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 1e300;
        for (int trial = 0; trial < 200; ++trial) {
            const double s1 = u(rng), s2 = u(rng), k1 = 0.2 + 3 * u(rng), k2 = 0.2 + 3 * u(rng);
            const double t1 = 10 * (u(rng) - 0.5), t2 = 10 * (u(rng) - 0.5);
            auto lo_f = [&](double t) { return s1 * sigmoid(k1 * (t - t1)); };
            auto hi_f = [&](double t) { return lo_f(t) + (1 - lo_f(t)) * s2 * sigmoid(k2 * (t - t2)); };
            const auto lo = make_profile(cfg, 15.0, lo_f, 0.0, s1, LeftTail::zero);
            const auto hi = make_profile(cfg, 15.0, hi_f, 0.0, s1 + (1 - s1) * s2, LeftTail::zero);
            worst = std::min(worst, qm_defect(lo, hi, cfg));
        }
        CHECK(worst >= -1e-12);
    }
}

TEST_CASE("misaligned grids are rejected") {
    const auto cfg = make_operator_config(ModelParams::make(0.2, 0.2, 3.0), 16);
    auto g = make_profile(cfg, 5.0, [](double t) { return sigmoid(t); }, 1.0, 1.0);
    g.dt *= 1.001;
    CHECK_THROWS_AS(shift(g, cfg), ValidationError);
    g.dt /= 1.001;
    g.m = 8;
    CHECK_THROWS_AS(op_F(g, cfg), ValidationError);
}
