#include "kppfront/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kppfront/curves.hpp"
#include "kppfront/errors.hpp"

namespace kppfront {

namespace {

// -(F(g) + Lg), sharing Bg and SBg.
std::vector<double> iteration_rhs(const GridProfile& g, const OperatorConfig& cfg) {
    const GridProfile bg = resolvent_B(g, cfg);
    const GridProfile sbg = shift(bg, cfg);
    const double one_minus_b = 1.0 - cfg.params.b;
    std::vector<double> r(g.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = -(bg.values[i] * (1.0 - one_minus_b * sbg.values[i]) + sbg.values[i]);
    }
    return r;
}

// Weights of the far and near node when integrating e^{q u} against the
// linear interpolant over one cell of width h: h int_0^1 e^{x s} s ds and
// h int_0^1 e^{x s} (1 - s) ds with x = q h.
std::pair<double, double> exponential_cell_weights(double q, double h) {
    const double x = q * h;
    double far = 0.0;
    double near = 0.0;
    if (std::abs(x) < 0.5) {
        double term = 1.0;  // x^k / k!
        for (int k = 0; k < 30; ++k) {
            far += term / (k + 2);
            near += term / ((k + 1.0) * (k + 2.0));
            term *= x / (k + 1);
        }
    } else {
        const double ex = std::exp(x);
        far = (ex * (x - 1.0) + 1.0) / (x * x);
        near = std::expm1(x) / x - far;
    }
    return {h * far, h * near};
}

}  // namespace

double default_half_width(const SpectralRoots& roots) {
    if (!roots.lambda2 || !roots.mu1) throw ValidationError("half-width needs lambda2 and mu1");
    return 40.0 / std::min(*roots.lambda2, std::abs(*roots.mu1));
}

bool IterationReport::ok() const {
    return converged && monotone_defect <= 1e-9 && min_forward_difference >= -1e-9 && sandwich_defect <= 1e-9;
}

DelayedBvp::DelayedBvp(const OperatorConfig& cfg, std::size_t n)
    : cfg_(cfg), n_(n), lu_(n, static_cast<std::size_t>(cfg.depth + 1) * static_cast<std::size_t>(cfg.m)) {
    if (n < 3) throw ValidationError("delayed boundary-value problem needs at least 3 nodes");
    const double dt = cfg.dt();
    const double c = cfg.params.c;
    const double diff = 1.0 / (dt * dt);
    const double adv = c / (2.0 * dt);
    const auto m = static_cast<std::size_t>(cfg.m);
    lu_.at(0, 0) = 1.0;
    lu_.at(n - 1, n - 1) = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        lu_.at(i, i - 1) += diff + adv;
        lu_.at(i, i) += -2.0 * diff;
        lu_.at(i, i + 1) += diff - adv;
        double weight = 1.0;
        for (int j = 0; j <= cfg.depth; ++j, weight *= cfg.params.b) {
            const std::size_t back = static_cast<std::size_t>(j + 1) * m;
            if (back > i) break;
            lu_.at(i, i - back) -= weight;
        }
    }
    lu_.factor();
}

std::vector<double> DelayedBvp::solve(const std::vector<double>& rhs, double left,
                                      std::optional<double> left_rate, double right) const {
    if (rhs.size() != n_) throw ValidationError("right-hand side length does not match the grid");
    std::vector<double> r = rhs;
    r.front() = left;
    r.back() = right;
    if (left_rate && left != 0.0) {
        const double dt = cfg_.dt();
        const auto m = static_cast<std::ptrdiff_t>(cfg_.m);
        for (std::size_t i = 1; i + 1 < n_; ++i) {
            double weight = 1.0;
            for (int j = 0; j <= cfg_.depth; ++j, weight *= cfg_.params.b) {
                const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i) - (j + 1) * m;
                if (k >= 0) continue;
                r[i] += weight * left * std::exp(*left_rate * static_cast<double>(k) * dt);
            }
        }
    }
    return lu_.solve(std::move(r));
}

GridProfile iterate_once(const GridProfile& g, const DelayedBvp& bvp, double right_boundary) {
    const OperatorConfig& cfg = bvp.config();
    check_alignment(g, cfg);
    if (g.size() != bvp.matrix().size()) throw ValidationError("profile and linear problem sizes differ");
    std::optional<double> rate;
    if (g.left_tail == LeftTail::exponential) rate = g.left_rate;
    GridProfile h = g.with_values(bvp.solve(iteration_rhs(g, cfg), g.values.front(), rate, right_boundary));
    h.right_value = right_boundary;
    return h;
}

GridProfile iterate_once(const GridProfile& g, const OperatorConfig& cfg, double right_boundary) {
    const DelayedBvp bvp(cfg, g.size());
    return iterate_once(g, bvp, right_boundary);
}

IterationReport solve_front(const ModelParams& p, const SolveOptions& opts) {
    if (opts.m < 1) throw ValidationError("steps per delay m must be >= 1");
    if (!(opts.tol > 0.0)) throw ValidationError("tolerance must be positive");
    if (opts.max_iters < 1) throw ValidationError("max_iters must be >= 1");

    IterationReport rep;
    rep.params = p;
    rep.roots = spectral_roots(p);
    if (!rep.roots.has_chi0_roots() || !rep.roots.has_chi1_roots()) {
        std::ostringstream os;
        os << "(b, tau, c) = (" << p.b << ", " << p.tau << ", " << p.c
           << ") lies outside the existence domain";
        throw ValidationError(os.str());
    }
    if (rep.roots.critical_chi0) throw ValidationError("c equals c_*(tau); use critical_solve");

    rep.T = opts.T > 0.0 ? opts.T : default_half_width(rep.roots);
    rep.m = opts.m;
    const GridSpec grid = GridSpec::symmetric(rep.T, p.ctau, opts.m);
    rep.dt = grid.dt;
    const OperatorConfig cfg = make_operator_config(p, opts.m);

    SuperBuild sup = build_super(rep.roots, p, grid, opts.start_shift);
    const SubBuild sub = build_sub(sup.fn, rep.roots, p, grid, opts.start_shift);
    rep.super_fn = sup.fn;
    rep.sub_fn = sub.fn;

    const DelayedBvp bvp(cfg, grid.n);
    rep.min_abs_pivot = bvp.matrix().min_abs_pivot();
    rep.max_abs_pivot = bvp.matrix().max_abs_pivot();

    GridProfile g = sup.grid;
    rep.min_forward_difference = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iters; ++it) {
        GridProfile h = iterate_once(g, bvp, opts.right_boundary);
        double delta = 0.0;
        double rise = 0.0;
        double min_fd = std::numeric_limits<double>::infinity();
        double sandwich = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) {
            const double d = h.values[i] - g.values[i];
            delta = std::max(delta, std::abs(d));
            rise = std::max(rise, d);
            if (i + 1 < h.size()) min_fd = std::min(min_fd, h.values[i + 1] - h.values[i]);
            sandwich = std::max({sandwich, sub.grid.values[i] - h.values[i], h.values[i] - sup.grid.values[i]});
        }
        rep.deltas.push_back(delta);
        rep.monotone_defect = std::max(rep.monotone_defect, rise);
        rep.min_forward_difference = std::min(rep.min_forward_difference, min_fd);
        rep.sandwich_defect = std::max(rep.sandwich_defect, sandwich);
        g = std::move(h);
        rep.iters = it + 1;
        if (delta < opts.tol) {
            rep.converged = true;
            break;
        }
    }

    rep.profile_w = g;
    const GridProfile bw = resolvent_B(g, cfg);
    rep.profile_u = bw;
    for (double& v : rep.profile_u.values) v *= 1.0 - p.b;
    rep.profile_u.right_value *= 1.0 - p.b;

    const GridProfile res = residual_pew(rep.profile_w, cfg, Stencil::fourth_order);
    for (double v : res.values) rep.residual_pew_sup = std::max(rep.residual_pew_sup, std::abs(v));
    rep.residual_pe_sup = residual_pe(rep.profile_u, cfg);
    rep.n1_identity_defect = n1_identity_check(rep.profile_w, cfg);
    try {
        rep.tail_slope = tail_slope(rep.profile_w);
    } catch (const ValidationError&) {
        rep.tail_slope = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

double residual_pe(const GridProfile& u, const OperatorConfig& cfg, Stencil stencil) {
    check_alignment(u, cfg);
    const GridProfile su = shift(u, cfg);
    const double b = cfg.params.b;
    const double c = cfg.params.c;
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = u.values[i] - b * su.values[i];
    std::vector<double> d1, d2;
    grid_derivatives(u.with_values(v), stencil, d1, d2);
    const std::size_t skip = stencil == Stencil::fourth_order ? 2 : 1;
    double worst = 0.0;
    for (std::size_t i = skip; i + skip < u.size(); ++i) {
        const double r = d2[i] - c * d1[i] + u.values[i] * (1.0 - su.values[i]);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double n1_identity_check(const GridProfile& w, const OperatorConfig& cfg) {
    check_alignment(w, cfg);
    const std::size_t n = w.size();
    if (n < 2) throw ValidationError("integral identity needs at least 2 nodes");
    const double c = cfg.params.c;
    const double root = std::sqrt(c * c + 4.0);
    const double z1 = 0.5 * (c - root);
    const double z2 = 0.5 * (c + root);
    const double alpha = 1.0 / root;
    const double h = w.dt;

    const GridProfile fw = op_F(w, cfg);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = w.values[i] + fw.values[i];
    const double f_right = w.right_value + fw.right_value;

    std::vector<double> left(n), right(n);
    left[0] = w.left_tail == LeftTail::exponential ? f[0] / (w.left_rate - z1) : 0.0;
    const auto [far1, near1] = exponential_cell_weights(z1, h);
    const double e1 = std::exp(z1 * h);
    for (std::size_t i = 1; i < n; ++i) left[i] = e1 * left[i - 1] + far1 * f[i - 1] + near1 * f[i];

    right[n - 1] = f_right / z2;
    const auto [far2, near2] = exponential_cell_weights(-z2, h);
    const double e2 = std::exp(-z2 * h);
    for (std::size_t i = n - 1; i-- > 0;) right[i] = e2 * right[i + 1] + far2 * f[i + 1] + near2 * f[i];

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(w.values[i] - alpha * (left[i] + right[i])));
    }
    return worst;
}

double tail_slope(const GridProfile& g) {
    double floor = g.values.empty() ? 0.0 : g.values.front();
    if (!(floor > 0.0)) {
        floor = std::numeric_limits<double>::infinity();
        for (double v : g.values) {
            if (v > 0.0) floor = std::min(floor, v);
        }
    }
    const double lo = 10.0 * floor;
    const double hi = 1e-3;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double v = g.values[i];
        if (!(v >= lo && v <= hi)) continue;
        const double x = g.t(static_cast<std::ptrdiff_t>(i));
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 3) throw ValidationError("tail window [10 g_floor, 1e-3] holds fewer than 3 nodes; enlarge T");
    const double k = static_cast<double>(count);
    const double mx = sx / k;
    return (sxy - k * mx * (sy / k)) / (sxx - k * mx * mx);
}

double level_crossing(const GridProfile& g, double level) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.values[i] < level) continue;
        if (i == 0) return g.t_start;
        const double a = g.values[i - 1];
        const double b = g.values[i];
        return g.t(static_cast<std::ptrdiff_t>(i) - 1) + (level - a) / (b - a) * g.dt;
    }
    std::ostringstream os;
    os << "profile never reaches level " << level;
    throw ValidationError(os.str());
}

double sup_difference(const GridProfile& f, const GridProfile& g) {
    double worst = 0.0;
    const double lo = g.t_start;
    const double hi = g.t_end();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double t = f.t(static_cast<std::ptrdiff_t>(i));
        if (t < lo || t > hi) continue;
        worst = std::max(worst, std::abs(f.values[i] - g.sample(t)));
    }
    return worst;
}

UniquenessResult uniqueness_check(const ModelParams& p, const SolveOptions& opts, double shift_delays) {
    UniquenessResult out;
    out.requested_shift = shift_delays * p.ctau;
    out.first = solve_front(p, opts);
    SolveOptions moved = opts;
    moved.start_shift += out.requested_shift;
    out.second = solve_front(p, moved);
    const GridProfile& w1 = out.first.profile_w;
    const GridProfile& w2 = out.second.profile_w;
    out.offset = level_crossing(w2) - level_crossing(w1);

    // Same node layout: split the offset into whole steps and a fraction so
    // that a zero offset compares node values directly.
    const double steps = out.offset / w1.dt;
    const auto whole = static_cast<std::ptrdiff_t>(std::lround(steps));
    const double frac = steps - static_cast<double>(whole);
    const auto n2 = static_cast<std::ptrdiff_t>(w2.size());
    double worst = 0.0;
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(w1.size()); ++i) {
        const std::ptrdiff_t j = i + whole;
        const std::ptrdiff_t other = frac >= 0.0 ? j + 1 : j - 1;
        if (j < 0 || j >= n2 || other < 0 || other >= n2) continue;
        const double wt = std::abs(frac);
        const double v2 = (1.0 - wt) * w2.values[static_cast<std::size_t>(j)] +
                          wt * w2.values[static_cast<std::size_t>(other)];
        worst = std::max(worst, std::abs(w1.values[static_cast<std::size_t>(i)] - v2));
    }
    out.defect = worst;
    return out;
}

CriticalReport critical_solve(double b, double tau, const SolveOptions& opts, int k_max) {
    if (k_max < 3) throw ValidationError("critical_solve needs k_max >= 3");
    CriticalReport rep;
    rep.c_star = c_star(tau, b).c;
    // The contraction weakens as lambda1 - lambda2 closes; give each level
    // room in proportion to 2^k.
    SolveOptions level = opts;
    for (int k = 2; k <= k_max; ++k) {
        level.max_iters = std::max(opts.max_iters, 100 << k);
        const double ck = rep.c_star * (1.0 + std::ldexp(1.0, -k));
        IterationReport r;
        try {
            r = solve_front(ModelParams::make(b, tau, ck), level);
        } catch (const std::exception&) {
            rep.failed = true;
            break;
        }
        if (!r.converged) rep.failed = true;
        GridProfile w = r.profile_w;
        w.t_start -= level_crossing(w);
        rep.ks.push_back(k);
        rep.speeds.push_back(ck);
        rep.monotone.push_back(r.min_forward_difference >= -1e-9);
        if (!rep.profiles.empty()) rep.cauchy_diffs.push_back(sup_difference(w, rep.profiles.back()));
        rep.profiles.push_back(std::move(w));
        rep.last = std::move(r);
        if (rep.failed) break;
    }
    return rep;
}

}  // namespace kppfront
