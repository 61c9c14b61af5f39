#pragma once

#include <optional>

#include "kppfront/spectral.hpp"

namespace kppfront {

inline constexpr double kCurveTol = 1e-10;

/// A point on a critical-speed curve together with the double zero of the
/// characteristic function there (lambda for c_star, mu for c_hash).
struct CurveSample {
    double tau = 0.0;
    double c = 0.0;
    double double_root = 0.0;
};

/// Minimal speed c_*(tau): chi0 has positive zeros iff c >= c_*.
/// Bisection on that predicate over [2, 2 / sqrt(1 - b)].
CurveSample c_star(double tau, double b, double tol = kCurveTol);

/// Threshold delay tau(b): for tau <= tau(b) chi1 has negative zeros at
/// every speed. Solved through the parametrisation
/// tau = s^2 e^{-s}, b = (1 - s) e^{-s}, s in (0, 1).
double tau_critical(double b);

/// Upper speed c_#(tau): for tau > tau(b), chi1 has negative zeros iff
/// c <= c_#. nullopt for tau <= tau(b). Throws NumericError when the
/// doubling search exceeds 2^64 (the curve is unbounded near tau(b)).
std::optional<CurveSample> c_hash(double tau, double b, double tol = kCurveTol);

/// Membership of (tau, c) in the existence domain.
struct DomainVerdict {
    bool in_domain = false;
    SpectralRoots roots;
    double c_star_at_tau = 0.0;
    std::optional<double> c_hash_at_tau;  // +inf when numerically unbounded
    double tau_critical = 0.0;
};

DomainVerdict in_domain(const ModelParams& p);

/// The unique crossing of c_* and c_# (0 < b < 1).
struct Intersection {
    double tau0 = 0.0;
    double c0 = 0.0;
};
Intersection intersection(double b);

/// Relative defects of the curve ODEs
///   c_*' = -c_*/tau + c_*^2 / (2 lambda tau),  c_#' = -c_#/tau + c_#^2 / (2 mu tau)
/// with central differences of step 1e-5 tau. Requires tau > tau(b).
struct CurveOdeDefects {
    double star = 0.0;
    double hash = 0.0;
};
CurveOdeDefects curve_ode_check(double b, double tau);

/// Right-hand sides of the curve ODEs at a sample.
double curve_slope_from_root(const CurveSample& s);

/// Classical quasi-monotonicity applicability bound c tau <= 1/e.
bool wu_zou_bound(double tau, double c);

/// Root-existence predicates used by the curve bisections (exact sign of
/// the extremal value, no critical tolerance).
bool chi0_has_positive_roots(const ModelParams& p);
bool chi1_has_negative_roots(const ModelParams& p);

}  // namespace kppfront
