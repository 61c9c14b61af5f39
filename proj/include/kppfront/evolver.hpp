#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "kppfront/grid.hpp"
#include "kppfront/spectral.hpp"

namespace kppfront {

/// Explicit method of lines for
///   d/dt (u - b u(t - tau)) = d2/dx2 (u - b u(t - tau)) + u (1 - u(t - tau))
/// on a uniform x grid. v = u - b u(t - tau) is stepped with forward Euler
/// and u is rebuilt from v and the history ring.
class NeutralEvolver {
public:
    using History = std::function<double(double s, double x)>;

    /// dt_time must divide tau exactly and satisfy dt_time <= dx^2 / 2.
    /// `history(s, x)` supplies u on s in [-tau, 0].
    NeutralEvolver(const ModelParams& p, double x_lo, double dx, std::size_t nx, double dt_time,
                   const History& history, double left_value, double right_value);

    void step();

    double time() const { return static_cast<double>(steps_) * dt_; }
    double dt_time() const { return dt_; }
    int delay_steps() const { return k_; }
    double x(std::size_t i) const { return x_lo_ + static_cast<double>(i) * dx_; }
    std::size_t size() const { return nx_; }
    const std::vector<double>& u() const { return slice(steps_); }
    const std::vector<double>& v() const { return v_; }

    /// Interpolated first crossing of `level` by the current slice.
    double front_position(double level = 0.5) const;

private:
    ModelParams p_;
    double x_lo_;
    double dx_;
    std::size_t nx_;
    double dt_;
    int k_;
    long steps_ = 0;
    double left_;
    double right_;
    std::vector<std::vector<double>> ring_;  // u^{n-k} .. u^{n}
    std::vector<double> v_;
    std::vector<double> scratch_;

    const std::vector<double>& slice(long n) const;
    std::vector<double>& slice(long n);
};

/// Largest dt_time <= dx^2 / 2 with tau / dt_time an integer.
double stable_time_step(double tau, double dx);

struct EvolveOptions {
    double horizon = 10.0;
    double dx = 0.05;
    double dt_time = 0.0;      // 0 selects stable_time_step(tau, dx)
    double margin = 10.0;      // minimum front distance to either boundary
    double right_pad = 20.0;   // x_hi = x_0.5 + right_pad
    double left_pad = 40.0;    // x_lo = x_0.5 - c horizon - left_pad
};

struct EvolveResult {
    double speed = 0.0;        // -(slope of the front position), compare with c
    double shape_error = 0.0;  // sup_x |u(t_end, x) - phi(x + c t_end)|
    double dt_time = 0.0;
    int delay_steps = 0;
    double x_lo = 0.0;
    double x_hi = 0.0;
    double min_u = 0.0;
    double max_u = 0.0;
    double min_boundary_distance = 0.0;
    std::vector<std::pair<double, double>> fronts;  // (t, x_0.5)
    std::vector<double> x;
    std::vector<double> final_u;
};

/// Runs the initial history u(s, x) = phi(x + c s) forward to the horizon.
/// Throws ValidationError for CFL violations, misaligned history or a
/// horizon below 5, NumericError when the front comes within `margin` of
/// a boundary.
EvolveResult evolve(const GridProfile& profile_u, const ModelParams& p, const EvolveOptions& opts = {});

}  // namespace kppfront
