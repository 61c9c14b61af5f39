#include "kppfront/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kppfront/errors.hpp"

namespace kppfront {

double SuperSolution::operator()(double t) const {
    return t <= zeta ? a * std::exp(lambda2 * t) : -std::expm1(mu1 * t);
}

double SuperSolution::value_mismatch() const {
    return std::abs(-std::expm1(mu1 * zeta) - a * std::exp(lambda2 * zeta));
}

double SuperSolution::slope_mismatch() const {
    return std::abs(-mu1 * std::exp(mu1 * zeta) - a * lambda2 * std::exp(lambda2 * zeta));
}

double SuperSolution::derivative_bound() const {
    const double left = a * std::pow(lambda2, 3) * std::exp(lambda2 * zeta) * std::max(1.0, lambda2);
    const double r = std::abs(mu1);
    const double right = std::pow(r, 3) * std::exp(mu1 * zeta) * std::max(1.0, r);
    return std::max(left, right);
}

double SubSolution::operator()(double t) const {
    if (t >= xi) return 0.0;
    return -a * std::exp(lambda2 * t) * std::expm1(std::log(M) + eps * t);
}

double SubSolution::derivative_bound() const {
    const double scale = a * std::exp(lambda2 * xi);
    const double fast = lambda2 + eps;
    const double third = std::pow(lambda2, 3) + std::pow(fast, 3);
    const double fourth = std::pow(lambda2, 4) + std::pow(fast, 4);
    return scale * std::max(third, fourth);
}

SuperBuild build_super(const SpectralRoots& roots, const ModelParams& /*p*/, const GridSpec& grid,
                       double shift) {
    if (!roots.lambda2 || !roots.mu1 || roots.critical_chi0) {
        throw ValidationError("super-solution needs (tau, c) outside the critical case and inside the "
                              "existence domain: outside the existence domain or critical");
    }
    SuperSolution s;
    s.lambda2 = *roots.lambda2;
    s.mu1 = *roots.mu1;
    s.zeta = std::log(s.lambda2 / (s.lambda2 - s.mu1)) / s.mu1;
    s.a = -std::expm1(s.mu1 * s.zeta) * std::exp(-s.lambda2 * s.zeta);

    const double t_end = grid.t_start + static_cast<double>(grid.n - 1) * grid.dt - shift;
    GridProfile g = render(s, grid, shift, s.lambda2, -std::expm1(s.mu1 * t_end));
    return {s, std::move(g)};
}

SubBuild build_sub(const SuperSolution& sup, const SpectralRoots& roots, const ModelParams& p,
                   const GridSpec& grid, double shift) {
    if (!roots.lambda1 || !roots.lambda2 || roots.critical_chi0) {
        throw ValidationError("sub-solution needs distinct positive zeros of chi0");
    }
    const double l1 = *roots.lambda1;
    const double l2 = *roots.lambda2;

    SubSolution s;
    s.a = sup.a;
    s.lambda2 = l2;
    s.eps = 0.5 * std::min(l2, l1 - l2);
    s.chi0_at_shifted = chi0(l2 + s.eps, p);
    if (!(s.chi0_at_shifted <= -kChi0Margin)) {
        std::ostringstream os;
        os.precision(17);
        os << "sub-solution: chi0(lambda2 + eps) = " << s.chi0_at_shifted << " misses the margin -"
           << kChi0Margin;
        throw NumericError(os.str());
    }

    const double e = std::exp(-l2 * p.ctau);
    const double denom = 1.0 - p.b * e;
    const double coupling = s.a * (1.0 - p.b) * e / (denom * denom);
    const double gap = -s.chi0_at_shifted;
    // Smallest power of two M >= 2 with gap >= 2 coupling M^{-lambda2/eps}.
    double log2_m = 1.0;
    const double ratio = l2 / s.eps;
    while (gap < 2.0 * coupling * std::exp2(-ratio * log2_m)) {
        log2_m += 1.0;
        if (log2_m > 1000.0) throw NumericError("sub-solution: no amplitude M up to 2^1000 meets the margin");
    }
    s.M = std::exp2(log2_m);
    s.xi = -std::log(s.M) / s.eps;
    s.margin = gap - coupling * std::exp2(-ratio * log2_m);

    GridProfile g = render(s, grid, shift, l2, 0.0);
    return {s, std::move(g)};
}

void grid_derivatives(const GridProfile& g, Stencil stencil, std::vector<double>& d1,
                      std::vector<double>& d2) {
    const std::size_t n = g.size();
    if (n < 5) throw ValidationError("derivative stencils need at least 5 nodes");
    const double h = g.dt;
    const auto& v = g.values;
    d1.assign(n, 0.0);
    d2.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d1[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
        d2[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
    }
    d1[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d2[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (h * h);
    const std::size_t l = n - 1;
    d1[l] = (3.0 * v[l] - 4.0 * v[l - 1] + v[l - 2]) / (2.0 * h);
    d2[l] = (2.0 * v[l] - 5.0 * v[l - 1] + 4.0 * v[l - 2] - v[l - 3]) / (h * h);
    if (stencil == Stencil::fourth_order) {
        for (std::size_t i = 2; i + 2 < n; ++i) {
            d1[i] = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h);
            d2[i] = (-v[i + 2] + 16.0 * v[i + 1] - 30.0 * v[i] + 16.0 * v[i - 1] - v[i - 2]) / (12.0 * h * h);
        }
    }
}

GridProfile residual_pew(const GridProfile& g, const OperatorConfig& cfg, Stencil stencil) {
    const GridProfile f = op_F(g, cfg);
    std::vector<double> d1, d2;
    grid_derivatives(g, stencil, d1, d2);
    const double c = cfg.params.c;
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = d2[i] - c * d1[i] + f.values[i];
    GridProfile r = g.with_values(std::move(out));
    r.left_tail = LeftTail::zero;
    r.right_value = f.right_value;
    return r;
}

double sign_tolerance(double dt, double derivative_bound, double c) {
    return std::max(1e-10, 10.0 * dt * dt * derivative_bound * (1.0 + c));
}

}  // namespace kppfront
