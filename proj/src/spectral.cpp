#include "kppfront/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "kppfront/errors.hpp"
#include "numeric_util.hpp"

namespace kppfront {

ModelParams ModelParams::make(double b, double tau, double c, double trunc_tol) {
    if (!std::isfinite(b) || b < 0.0 || b >= 1.0) {
        std::ostringstream os;
        os << "neutral coefficient b must satisfy 0 <= b < 1, got " << b;
        throw ValidationError(os.str());
    }
    if (!std::isfinite(tau) || tau <= 0.0) {
        throw ValidationError("delay tau must be positive and finite");
    }
    if (!std::isfinite(c) || c <= 0.0) {
        throw ValidationError("wave speed c must be positive and finite");
    }
    if (!(trunc_tol > 0.0 && trunc_tol < 1.0)) {
        throw ValidationError("series truncation tolerance must lie in (0, 1)");
    }
    ModelParams p;
    p.b = b;
    p.tau = tau;
    p.c = c;
    p.ctau = c * tau;
    p.trunc_tol = trunc_tol;
    return p;
}

int ModelParams::series_depth() const {
    if (b == 0.0) return 0;
    int depth = 0;
    double power = b;  // b^(depth+1)
    while (power >= trunc_tol) {
        power *= b;
        ++depth;
    }
    return depth;
}

double ModelParams::strip_edge() const {
    if (b == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(b) / ctau;
}

namespace {

void guard_strip(double z, const ModelParams& p) {
    if (p.b == 0.0) return;
    if (z <= p.strip_edge() + kStripGuard) {
        std::ostringstream os;
        os.precision(17);
        os << "z = " << z << " lies within " << kStripGuard << " of the strip edge ln(b)/(c tau) = "
           << p.strip_edge();
        throw DomainError(os.str());
    }
}

// 1 - b e^{-x}, accurate near the strip edge.
double one_minus_bexp(double x, const ModelParams& p) {
    if (p.b == 0.0) return 1.0;
    return -std::expm1(std::log(p.b) - x);
}

// e^{x} - b, accurate near the strip edge.
double exp_minus_b(double x, const ModelParams& p) {
    if (p.b == 0.0) return std::exp(x);
    return p.b * std::expm1(x - std::log(p.b));
}

}  // namespace

double chi0(double z, const ModelParams& p) {
    guard_strip(z, p);
    const double x = z * p.ctau;
    return z * z - p.c * z + 1.0 / one_minus_bexp(x, p);
}

double chi0_prime(double z, const ModelParams& p) {
    guard_strip(z, p);
    const double x = z * p.ctau;
    const double d = one_minus_bexp(x, p);
    return 2.0 * z - p.c - p.ctau * (1.0 - d) / (d * d);
}

double chi1(double z, const ModelParams& p) {
    guard_strip(z, p);
    const double x = z * p.ctau;
    return z * z - p.c * z - 1.0 / exp_minus_b(x, p);
}

double chi1_prime(double z, const ModelParams& p) {
    guard_strip(z, p);
    const double x = z * p.ctau;
    const double e = exp_minus_b(x, p);
    return 2.0 * z - p.c + p.ctau * (e + p.b) / (e * e);
}

Extremum chi0_minimum(const ModelParams& p) {
    double lo = 0.0;
    double hi = std::max(p.c, 1.0);
    int doublings = 0;
    while (chi0_prime(hi, p) <= 0.0) {
        hi *= 2.0;
        if (++doublings > 200) throw NumericError("chi0_minimum: no upper bracket for chi0'");
    }

    // Spot-check convexity on the bracket.
    constexpr int kSamples = 16;
    std::array<double, kSamples + 1> f{};
    double scale = 1.0;
    for (int k = 0; k <= kSamples; ++k) {
        f[k] = chi0(hi * k / kSamples, p);
        scale = std::max(scale, std::abs(f[k]));
    }
    for (int k = 1; k < kSamples; ++k) {
        const double d2 = f[k - 1] - 2.0 * f[k] + f[k + 1];
        if (d2 < -1e-10 * scale) {
            std::ostringstream os;
            os << "chi0 convexity violated near z = " << hi * k / kSamples
               << " (second difference " << d2 << ")";
            throw NumericError(os.str());
        }
    }

    const double z = detail::bisect_sign_change([&](double x) { return chi0_prime(x, p); }, lo, hi);
    return {z, chi0(z, p)};
}

NegativeInterval chi1_search_interval(const ModelParams& p) {
    NegativeInterval iv;
    iv.hi = -1e-14;
    if (p.b > 0.0) {
        const double edge = p.strip_edge();
        double delta = std::max(1e-6 * std::abs(edge), 1e-7);
        // Creep towards the pole until chi1 is negative; the outer zero can
        // sit closer to the edge than the nominal clip when c tau is small.
        while (chi1(edge + delta, p) >= 0.0) {
            delta *= 0.5;
            if (delta <= 2.0 * kStripGuard) {
                throw NumericError(
                    "chi1 zero lies within the guarded neighbourhood of the strip edge");
            }
        }
        iv.lo = edge + delta;
    } else {
        // b = 0: zeros satisfy h(s) = ln(s^2 + c s) - c tau s = 0 with s = -z;
        // h is concave, so past a point with h < 0 and h' < 0 there are none.
        double s = 1.0;
        auto h = [&](double x) { return std::log(x * x + p.c * x) - p.ctau * x; };
        auto dh = [&](double x) { return 1.0 / x + 1.0 / (x + p.c) - p.ctau; };
        int doublings = 0;
        while (!(h(s) < 0.0 && dh(s) < 0.0)) {
            s *= 2.0;
            if (++doublings > 200) throw NumericError("chi1 search interval: no left bound");
        }
        iv.lo = -s;
    }
    return iv;
}

Extremum chi1_maximum(const ModelParams& p) {
    const NegativeInterval iv = chi1_search_interval(p);
    constexpr int kSamples = 2048;
    const double h = (iv.hi - iv.lo) / (kSamples - 1);
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < kSamples; ++k) {
        const double z = (k == kSamples - 1) ? iv.hi : iv.lo + k * h;
        const double v = chi1(z, p);
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }
    double a = iv.lo + std::max(best - 1, 0) * h;
    double b = std::min(iv.lo + (best + 1) * h, iv.hi);
    auto f = [&](double z) { return chi1(z, p); };
    auto df = [&](double z) { return chi1_prime(z, p); };

    double z = detail::golden_section_max(f, a, b);
    // Polish on the derivative when it brackets a sign change.
    if (df(a) > 0.0 && df(b) < 0.0) {
        z = detail::bisect_sign_change([&](double x) { return -df(x); }, a, b);
    }
    double value = f(z);
    if (best_value > value) {  // sample beat the refinement (boundary maximum)
        z = (best == kSamples - 1) ? iv.hi : iv.lo + best * h;
        value = best_value;
    }
    return {z, value};
}

std::optional<RootPair> chi0_positive_roots(const ModelParams& p) {
    const Extremum m = chi0_minimum(p);
    if (m.value > kCriticalTol) return std::nullopt;
    if (m.value >= -kCriticalTol) return RootPair{m.z, m.z, true};

    auto f = [&](double z) { return chi0(z, p); };
    RootPair r;
    r.lower = detail::bisect_sign_change(f, 0.0, m.z);
    double step = std::max(1.0, m.z);
    double hi = m.z + step;
    int doublings = 0;
    while (f(hi) <= 0.0) {
        step *= 2.0;
        hi = m.z + step;
        if (++doublings > 200) throw NumericError("chi0 upper root: no bracket");
    }
    r.upper = detail::bisect_sign_change(f, m.z, hi);
    return r;
}

std::optional<RootPair> chi1_negative_roots(const ModelParams& p) {
    const Extremum m = chi1_maximum(p);
    if (m.value < -kCriticalTol) return std::nullopt;
    if (m.value <= kCriticalTol) return RootPair{m.z, m.z, true};

    const NegativeInterval iv = chi1_search_interval(p);
    auto f = [&](double z) { return chi1(z, p); };
    RootPair r;
    r.lower = detail::bisect_sign_change(f, iv.lo, m.z);
    r.upper = detail::bisect_sign_change(f, m.z, iv.hi);
    return r;
}

SpectralRoots spectral_roots(const ModelParams& p) {
    SpectralRoots s;
    if (auto r = chi0_positive_roots(p)) {
        s.lambda2 = r->lower;
        s.lambda1 = r->upper;
        s.critical_chi0 = r->critical;
    }
    if (auto r = chi1_negative_roots(p)) {
        s.mu2 = r->lower;
        s.mu1 = r->upper;
        s.critical_chi1 = r->critical;
    }
    return s;
}

}  // namespace kppfront
