#include "kppfront/curves.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "kppfront/errors.hpp"
#include "numeric_util.hpp"

namespace kppfront {

namespace {

void require_curve_args(double tau, double b) {
    if (!std::isfinite(tau) || tau <= 0.0) throw ValidationError("tau must be positive and finite");
    if (!std::isfinite(b) || b < 0.0 || b >= 1.0) throw ValidationError("b must satisfy 0 <= b < 1");
}

// Bisection on a monotone predicate: pred(good) holds, pred(bad) does not.
template <typename Pred>
void bisect_predicate(Pred&& pred, double& good, double& bad, double tol) {
    for (int it = 0; it < 4000; ++it) {
        if (std::abs(bad - good) <= tol) break;
        const double mid = 0.5 * (good + bad);
        if (mid == good || mid == bad) break;
        if (pred(mid)) {
            good = mid;
        } else {
            bad = mid;
        }
    }
}

constexpr double kDoublingCap = 18446744073709551616.0;  // 2^64

}  // namespace

bool chi0_has_positive_roots(const ModelParams& p) { return chi0_minimum(p).value <= 0.0; }

bool chi1_has_negative_roots(const ModelParams& p) { return chi1_maximum(p).value >= 0.0; }

CurveSample c_star(double tau, double b, double tol) {
    require_curve_args(tau, b);
    if (b == 0.0) return {tau, 2.0, 1.0};

    auto pred = [&](double c) { return chi0_has_positive_roots(ModelParams::make(b, tau, c)); };
    double bad = 2.0;
    double good = 2.0 / std::sqrt(1.0 - b);
    if (!pred(good)) throw NumericError("c_star: upper bracket 2/sqrt(1-b) has no positive zeros");
    // For large tau the minimum of chi0 at c = 2 is below double resolution
    // (about b e^{-2 tau}); c_* is then 2 to working precision.
    if (pred(bad)) return {tau, bad, chi0_minimum(ModelParams::make(b, tau, bad)).z};
    bisect_predicate(pred, good, bad, tol);
    const double root = chi0_minimum(ModelParams::make(b, tau, good)).z;
    return {tau, good, root};
}

double tau_critical(double b) {
    require_curve_args(1.0, b);
    if (b == 0.0) return std::exp(-1.0);
    const double s = detail::bisect_sign_change(
        [&](double x) { return (1.0 - x) * std::exp(-x) - b; }, 0.0, 1.0);
    return s * s * std::exp(-s);
}

std::optional<CurveSample> c_hash(double tau, double b, double tol) {
    require_curve_args(tau, b);
    if (tau <= tau_critical(b)) return std::nullopt;

    auto pred = [&](double c) { return chi1_has_negative_roots(ModelParams::make(b, tau, c)); };
    double good = 1.0 / 16.0;
    while (!pred(good)) {
        good *= 0.5;
        if (good < 1.0 / kDoublingCap) throw NumericError("c_hash: no admissible speed above 2^-64");
    }
    double bad = good;
    while (pred(bad)) {
        good = bad;
        bad *= 2.0;
        if (bad > kDoublingCap) {
            std::ostringstream os;
            os << "c_hash unbounded: chi1 keeps negative zeros up to c = 2^64 at tau = " << tau;
            throw NumericError(os.str());
        }
    }
    const double eff_tol = std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * bad);
    bisect_predicate(pred, good, bad, eff_tol);
    const double root = chi1_maximum(ModelParams::make(b, tau, good)).z;
    return CurveSample{tau, good, root};
}

DomainVerdict in_domain(const ModelParams& p) {
    DomainVerdict v;
    v.roots = spectral_roots(p);
    v.in_domain = v.roots.has_chi0_roots() && v.roots.has_chi1_roots();
    v.c_star_at_tau = c_star(p.tau, p.b).c;
    v.tau_critical = tau_critical(p.b);
    if (p.tau > v.tau_critical) {
        try {
            if (auto s = c_hash(p.tau, p.b)) v.c_hash_at_tau = s->c;
        } catch (const NumericError&) {
            v.c_hash_at_tau = std::numeric_limits<double>::infinity();
        }
    }
    return v;
}

Intersection intersection(double b) {
    if (!(b > 0.0 && b < 1.0)) throw ValidationError("intersection requires 0 < b < 1");
    constexpr double kTightTol = 1e-13;
    auto gap = [&](double tau) {
        const double cs = c_star(tau, b, kTightTol).c;
        double ch = std::numeric_limits<double>::infinity();
        try {
            if (auto s = c_hash(tau, b, kTightTol)) ch = s->c;
        } catch (const NumericError&) {
        }
        return cs - ch;
    };

    const double tc = tau_critical(b);
    double lo = tc * (1.0 + 1e-6);
    if (gap(lo) >= 0.0) throw NumericError("intersection: c_star >= c_hash right above tau(b)");
    double hi = 2.0 * tc;
    int doublings = 0;
    while (gap(hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 16) throw NumericError("intersection: no sign change up to 2^16 tau(b)");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (gap(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double tau0 = std::abs(gap(lo)) < std::abs(gap(hi)) ? lo : hi;
    const double residual = gap(tau0);
    if (!(std::abs(residual) <= 1e-8)) {
        std::ostringstream os;
        os << "intersection: |c_star - c_hash| = " << residual << " at tau0 = " << tau0;
        throw NumericError(os.str());
    }
    return {tau0, c_star(tau0, b, kTightTol).c};
}

double curve_slope_from_root(const CurveSample& s) {
    return -s.c / s.tau + s.c * s.c / (2.0 * s.double_root * s.tau);
}

CurveOdeDefects curve_ode_check(double b, double tau) {
    require_curve_args(tau, b);
    if (tau <= tau_critical(b)) throw ValidationError("curve_ode_check requires tau > tau(b)");
    constexpr double kTightTol = 1e-14;
    const double h = 1e-5 * tau;
    auto rel = [](double fd, double rhs) { return std::abs(fd - rhs) / std::max(std::abs(rhs), 1e-12); };

    CurveOdeDefects d;
    {
        const CurveSample s = c_star(tau, b, kTightTol);
        const double fd = (c_star(tau + h, b, kTightTol).c - c_star(tau - h, b, kTightTol).c) / (2.0 * h);
        d.star = rel(fd, curve_slope_from_root(s));
    }
    {
        const auto s = c_hash(tau, b, kTightTol);
        const auto sp = c_hash(tau + h, b, kTightTol);
        const auto sm = c_hash(tau - h, b, kTightTol);
        if (!s || !sp || !sm) throw ValidationError("curve_ode_check: tau - h falls below tau(b)");
        const double fd = (sp->c - sm->c) / (2.0 * h);
        d.hash = rel(fd, curve_slope_from_root(*s));
    }
    return d;
}

bool wu_zou_bound(double tau, double c) {
    if (!(tau > 0.0 && c > 0.0)) throw ValidationError("wu_zou_bound requires tau, c > 0");
    return c * tau <= std::exp(-1.0);
}

}  // namespace kppfront
