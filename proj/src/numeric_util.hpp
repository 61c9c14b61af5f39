#pragma once

#include <cmath>
#include <stdexcept>

#include "kppfront/errors.hpp"

namespace kppfront::detail {

// Bisection on a bracket with f(lo), f(hi) of opposite (or zero) sign.
// Runs until the midpoint collapses onto an endpoint, i.e. to full
// double resolution.
template <typename F>
double bisect_sign_change(F&& f, double lo, double hi) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw NumericError("bisection: endpoints do not bracket a sign change");
    }
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return std::abs(flo) <= std::abs(f(hi)) ? lo : hi;
}

// Golden-section search for a maximum of a unimodal f on [a, b].
template <typename F>
double golden_section_max(F&& f, double a, double b) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? x1 : x2;
}

}  // namespace kppfront::detail
