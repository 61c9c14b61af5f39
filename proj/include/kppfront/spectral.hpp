#pragma once

#include <optional>

namespace kppfront {

/// Neutral coefficient b, delay tau and wave speed c of the neutral
/// KPP-Fisher equation
///
///   d/dt (u - b u(t - tau)) = d2/dx2 (u - b u(t - tau)) + u (1 - u(t - tau)).
///
/// Construct through make(); the constructor does not validate.
struct ModelParams {
    double b = 0.0;
    double tau = 1.0;
    double c = 2.0;
    double ctau = 2.0;
    /// Truncation tolerance for the geometric series sum_j b^j S^j.
    double trunc_tol = 1e-14;

    /// Validates 0 <= b < 1, tau > 0, c > 0 (all finite); throws ValidationError.
    static ModelParams make(double b, double tau, double c, double trunc_tol = 1e-14);

    /// Smallest J >= 0 with b^(J+1) < trunc_tol (J = 0 for b = 0).
    int series_depth() const;

    /// ln(b) / (c tau): left edge of the analyticity strip, -inf for b = 0.
    double strip_edge() const;
};

inline constexpr double kRootTol = 1e-12;
inline constexpr double kCriticalTol = 1e-8;
/// Distance from the strip edge inside which evaluation is refused.
inline constexpr double kStripGuard = 1e-8;

// chi0(z) = z^2 - c z + 1 / (1 - b e^{-z c tau})
double chi0(double z, const ModelParams& p);
double chi0_prime(double z, const ModelParams& p);
// chi1(z) = z^2 - c z - e^{-z c tau} / (1 - b e^{-z c tau})
double chi1(double z, const ModelParams& p);
double chi1_prime(double z, const ModelParams& p);

struct Extremum {
    double z = 0.0;
    double value = 0.0;
};

/// Interior minimiser of chi0 on z > 0. chi0 is convex there; the
/// convexity is spot-checked and a violation raises NumericError.
Extremum chi0_minimum(const ModelParams& p);

/// Global maximiser of chi1 on the negative part of the analyticity strip.
Extremum chi1_maximum(const ModelParams& p);

/// Two real roots, `lower <= upper`. `critical` marks a double root.
struct RootPair {
    double lower = 0.0;
    double upper = 0.0;
    bool critical = false;
};

/// Positive zeros (lambda2, lambda1) of chi0, or nullopt when chi0 > 0 on z > 0.
std::optional<RootPair> chi0_positive_roots(const ModelParams& p);

/// Negative zeros (mu2, mu1) of chi1, or nullopt when chi1 < 0 on the
/// negative part of the strip.
std::optional<RootPair> chi1_negative_roots(const ModelParams& p);

struct SpectralRoots {
    std::optional<double> lambda1, lambda2;  // 0 < lambda2 <= lambda1
    std::optional<double> mu1, mu2;          // strip_edge < mu2 <= mu1 < 0
    bool critical_chi0 = false;
    bool critical_chi1 = false;

    bool has_chi0_roots() const { return lambda2.has_value(); }
    bool has_chi1_roots() const { return mu1.has_value(); }
};

SpectralRoots spectral_roots(const ModelParams& p);

/// Search interval [lo, hi] used for the negative zeros of chi1.
struct NegativeInterval {
    double lo = 0.0;
    double hi = 0.0;
};
NegativeInterval chi1_search_interval(const ModelParams& p);

}  // namespace kppfront
