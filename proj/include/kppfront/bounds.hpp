#pragma once

#include "kppfront/grid.hpp"
#include "kppfront/spectral.hpp"

namespace kppfront {

/// phi_+(t) = a e^{lambda2 t} for t <= zeta, 1 - e^{mu1 t} for t > zeta,
/// with (a, zeta) fixed by C^1 matching at zeta.
struct SuperSolution {
    double a = 0.0;
    double zeta = 0.0;
    double lambda2 = 0.0;
    double mu1 = 0.0;

    double operator()(double t) const;
    /// Residuals of the value and slope matching at zeta.
    double value_mismatch() const;
    double slope_mismatch() const;
    /// Bound on |phi_+'''| and |phi_+''''| / rate over both branches.
    double derivative_bound() const;
};

/// phi_-(t) = a e^{lambda2 t} (1 - M e^{eps t}) for t < xi, 0 for t >= xi,
/// where xi = -ln(M) / eps is the zero of the bracket.
struct SubSolution {
    double eps = 0.0;
    double M = 0.0;
    double xi = 0.0;
    double a = 0.0;
    double lambda2 = 0.0;
    /// chi0(lambda2 + eps), negative by construction.
    double chi0_at_shifted = 0.0;
    /// Left side of the margin inequality; positive by construction.
    double margin = 0.0;

    double operator()(double t) const;
    double derivative_bound() const;
};

struct SuperBuild {
    SuperSolution fn;
    GridProfile grid;
};

struct SubBuild {
    SubSolution fn;
    GridProfile grid;
};

/// Margin demanded from chi0(lambda2 + eps) when choosing eps.
inline constexpr double kChi0Margin = 1e-6;

/// Requires distinct positive zeros of chi0 and a negative zero of chi1;
/// throws ValidationError("outside the existence domain or critical") otherwise.
/// The grid rendering is translated right by `shift`.
SuperBuild build_super(const SpectralRoots& roots, const ModelParams& p, const GridSpec& grid,
                       double shift = 0.0);

SubBuild build_sub(const SuperSolution& sup, const SpectralRoots& roots, const ModelParams& p,
                   const GridSpec& grid, double shift = 0.0);

/// Samples f(t - shift) on the grid; left tail exponential at `left_rate`.
template <typename Fn>
GridProfile render(const Fn& f, const GridSpec& grid, double shift, double left_rate,
                   double right_value) {
    GridProfile g;
    g.t_start = grid.t_start;
    g.dt = grid.dt;
    g.m = grid.m;
    g.left_rate = left_rate;
    g.right_value = right_value;
    g.values.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) g.values[i] = f(g.t(static_cast<std::ptrdiff_t>(i)) - shift);
    return g;
}

enum class Stencil {
    second_order,  // 3-point centred, one-sided at the ends
    fourth_order,  // 5-point centred, 3-point next to the ends, one-sided at the ends
};

/// Pointwise g'' - c g' + (Bg)(1 - (1 - b) SBg).
GridProfile residual_pew(const GridProfile& g, const OperatorConfig& cfg,
                         Stencil stencil = Stencil::second_order);

/// First and second derivatives on the grid with the given stencil.
void grid_derivatives(const GridProfile& g, Stencil stencil, std::vector<double>& d1,
                      std::vector<double>& d2);

/// Sign tolerance max(1e-10, 10 dt^2 K (1 + c)) for the certificate checks,
/// K a bound on the third and scaled fourth derivatives.
double sign_tolerance(double dt, double derivative_bound, double c);

}  // namespace kppfront
