#include "kppfront/evolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kppfront/errors.hpp"
#include "kppfront/solver.hpp"

namespace kppfront {

namespace {

int delay_step_count(double tau, double dt, double dx) {
    if (!(dt > 0.0)) throw ValidationError("time step must be positive");
    if (dt > 0.5 * dx * dx * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "time step " << dt << " violates the explicit stability bound dx^2/2 = " << 0.5 * dx * dx;
        throw ValidationError(os.str());
    }
    const double ratio = tau / dt;
    const double k = std::round(ratio);
    if (k < 1.0 || std::abs(ratio - k) > 1e-9 * ratio) {
        std::ostringstream os;
        os << "tau / dt_time = " << ratio << " is not an integer; the history would be misaligned";
        throw ValidationError(os.str());
    }
    return static_cast<int>(k);
}

}  // namespace

double stable_time_step(double tau, double dx) {
    if (!(dx > 0.0) || !(tau > 0.0)) throw ValidationError("tau and dx must be positive");
    return tau / std::ceil(tau / (0.5 * dx * dx));
}

NeutralEvolver::NeutralEvolver(const ModelParams& p, double x_lo, double dx, std::size_t nx, double dt_time,
                               const History& history, double left_value, double right_value)
    : p_(p), x_lo_(x_lo), dx_(dx), nx_(nx), dt_(dt_time), left_(left_value), right_(right_value) {
    if (!(dx > 0.0)) throw ValidationError("dx must be positive");
    if (nx < 3) throw ValidationError("evolver needs at least 3 spatial nodes");
    k_ = delay_step_count(p.tau, dt_time, dx);
    ring_.assign(static_cast<std::size_t>(k_) + 1, std::vector<double>(nx));
    for (int s = -k_; s <= 0; ++s) {
        auto& u = slice(s);
        for (std::size_t i = 0; i < nx; ++i) u[i] = history(static_cast<double>(s) * dt_, x(i));
        u.front() = left_;
        u.back() = right_;
    }
    const auto& now = slice(0);
    const auto& past = slice(-k_);
    v_.resize(nx);
    for (std::size_t i = 0; i < nx; ++i) v_[i] = now[i] - p_.b * past[i];
    scratch_.resize(nx);
}

const std::vector<double>& NeutralEvolver::slice(long n) const {
    const long len = static_cast<long>(ring_.size());
    return ring_[static_cast<std::size_t>(((n % len) + len) % len)];
}

std::vector<double>& NeutralEvolver::slice(long n) {
    const long len = static_cast<long>(ring_.size());
    return ring_[static_cast<std::size_t>(((n % len) + len) % len)];
}

void NeutralEvolver::step() {
    const auto& u = slice(steps_);
    const auto& delayed = slice(steps_ - k_);
    const double r = dt_ / (dx_ * dx_);
    auto& nv = scratch_;
    for (std::size_t i = 1; i + 1 < nx_; ++i) {
        nv[i] = v_[i] + r * (v_[i + 1] - 2.0 * v_[i] + v_[i - 1]) + dt_ * u[i] * (1.0 - delayed[i]);
    }
    // u^{n+1} = v^{n+1} + b u^{n+1-k}; u^{n-k} is no longer needed, so the
    // new slice overwrites it.
    const auto& back = slice(steps_ + 1 - k_);
    auto& next = slice(steps_ + 1);
    next.front() = left_;
    next.back() = right_;
    nv.front() = left_ - p_.b * back.front();
    nv.back() = right_ - p_.b * back.back();
    for (std::size_t i = 1; i + 1 < nx_; ++i) next[i] = nv[i] + p_.b * back[i];
    std::swap(v_, scratch_);
    ++steps_;
}

double NeutralEvolver::front_position(double level) const {
    const auto& u = this->u();
    for (std::size_t i = 1; i < nx_; ++i) {
        if (u[i] < level) continue;
        const double a = u[i - 1];
        return x(i - 1) + (level - a) / (u[i] - a) * dx_;
    }
    throw NumericError("evolved slice no longer crosses the front level");
}

EvolveResult evolve(const GridProfile& profile_u, const ModelParams& p, const EvolveOptions& opts) {
    if (!(opts.horizon >= 5.0)) throw ValidationError("evolution horizon must be at least 5 time units");
    if (!(opts.dx > 0.0)) throw ValidationError("dx must be positive");
    EvolveResult res;
    res.dt_time = opts.dt_time > 0.0 ? opts.dt_time : stable_time_step(p.tau, opts.dx);

    const double x_mid = level_crossing(profile_u, 0.5);
    res.x_lo = x_mid - p.c * opts.horizon - opts.left_pad;
    const auto nx = static_cast<std::size_t>(std::ceil((x_mid + opts.right_pad - res.x_lo) / opts.dx)) + 1;
    res.x_hi = res.x_lo + static_cast<double>(nx - 1) * opts.dx;

    const double c = p.c;
    auto history = [&](double s, double x) { return profile_u.sample(x + c * s); };
    NeutralEvolver ev(p, res.x_lo, opts.dx, nx, res.dt_time, history, 0.0, 1.0);
    res.delay_steps = ev.delay_steps();

    const auto steps = static_cast<long>(std::llround(opts.horizon / res.dt_time));
    res.min_u = std::numeric_limits<double>::infinity();
    res.max_u = -std::numeric_limits<double>::infinity();
    res.min_boundary_distance = std::numeric_limits<double>::infinity();
    auto observe = [&] {
        const double xf = ev.front_position();
        res.fronts.emplace_back(ev.time(), xf);
        res.min_boundary_distance = std::min({res.min_boundary_distance, xf - res.x_lo, res.x_hi - xf});
        for (double v : ev.u()) {
            res.min_u = std::min(res.min_u, v);
            res.max_u = std::max(res.max_u, v);
        }
    };
    observe();
    for (long n = 0; n < steps; ++n) {
        ev.step();
        observe();
        if (res.min_boundary_distance < opts.margin) {
            std::ostringstream os;
            os << "front came within " << res.min_boundary_distance << " of a boundary at t = " << ev.time();
            throw NumericError(os.str());
        }
    }

    // Least-squares slope of x_0.5(t) over the second half of the run.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    const double t_end = ev.time();
    for (const auto& [t, xf] : res.fronts) {
        if (t < 0.5 * t_end) continue;
        sx += t;
        sy += xf;
        sxx += t * t;
        sxy += t * xf;
        ++count;
    }
    const double k = static_cast<double>(count);
    const double slope = (sxy - sx * sy / k) / (sxx - sx * sx / k);
    res.speed = -slope;

    res.x.resize(nx);
    res.final_u = ev.u();
    for (std::size_t i = 0; i < nx; ++i) {
        res.x[i] = ev.x(i);
        res.shape_error = std::max(res.shape_error, std::abs(res.final_u[i] - profile_u.sample(res.x[i] + c * t_end)));
    }
    return res;
}

}  // namespace kppfront
