#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kppfront/banded.hpp"
#include "kppfront/bounds.hpp"
#include "kppfront/grid.hpp"
#include "kppfront/spectral.hpp"

namespace kppfront {

struct SolveOptions {
    double T = 0.0;  // half-width of [-T, T]; 0 selects 40 / min(lambda2, |mu1|)
    int m = 16;
    double tol = 1e-8;
    int max_iters = 500;
    /// Translate the starting super-solution (and the sandwich bounds) right.
    double start_shift = 0.0;
    double right_boundary = 1.0;
};

/// Default half-width 40 / min(lambda2, |mu1|).
double default_half_width(const SpectralRoots& roots);

struct IterationReport {
    ModelParams params;
    SpectralRoots roots;
    SuperSolution super_fn;
    SubSolution sub_fn;
    double T = 0.0;
    double dt = 0.0;
    int m = 0;

    int iters = 0;
    bool converged = false;
    std::vector<double> deltas;
    double monotone_defect = 0.0;        // max_n,t (phi_{n+1} - phi_n)_+
    double min_forward_difference = 0.0;  // over every iterate
    double sandwich_defect = 0.0;         // max_n,t of (phi_- - phi_n)_+ and (phi_n - phi_+)_+
    GridProfile profile_w;
    GridProfile profile_u;  // (1 - b) B w
    double residual_pew_sup = 0.0;
    double residual_pe_sup = 0.0;
    double tail_slope = 0.0;
    double n1_identity_defect = 0.0;
    double min_abs_pivot = 0.0;
    double max_abs_pivot = 0.0;

    /// Convergence plus the per-iterate invariants at 1e-9.
    bool ok() const;
};

/// Linear delayed two-point problem
///   h'' - c h' - sum_j b^j h(t - (j + 1) c tau) = r
/// on a grid of n nodes with Dirichlet data at both ends. The banded matrix
/// is assembled and factored once.
class DelayedBvp {
public:
    DelayedBvp(const OperatorConfig& cfg, std::size_t n);

    /// Delayed nodes left of the grid take left * e^{left_rate k dt} (k < 0)
    /// and move to the right-hand side; left_rate = nullopt makes them 0.
    std::vector<double> solve(const std::vector<double>& rhs, double left, std::optional<double> left_rate,
                              double right) const;

    const BandedLU& matrix() const { return lu_; }
    const OperatorConfig& config() const { return cfg_; }

private:
    OperatorConfig cfg_;
    std::size_t n_;
    BandedLU lu_;
};

/// One step phi -> -I[F(phi) + L phi]: solves the delayed problem with
/// r = -(F(g) + L g), h(-T) = g(-T) and h(T) = right_boundary. With a zero
/// left tail the delayed nodes left of the grid contribute 0.
GridProfile iterate_once(const GridProfile& g, const DelayedBvp& bvp, double right_boundary);
GridProfile iterate_once(const GridProfile& g, const OperatorConfig& cfg, double right_boundary);

/// Monotone iteration from the super-solution. Throws ValidationError
/// outside the existence domain or at the critical speed; non-convergence
/// is reported through `converged`.
IterationReport solve_front(const ModelParams& p, const SolveOptions& opts = {});

/// sup over interior nodes of |v'' - c v' + u (1 - Su)| with v = u - b Su.
double residual_pe(const GridProfile& u, const OperatorConfig& cfg, Stencil stencil = Stencil::fourth_order);

/// sup |w - N1 * [w + F(w)]| where N1(s) = alpha e^{z1 s} (s >= 0),
/// alpha e^{z2 s} (s < 0), z1 < 0 < z2 the roots of z^2 - c z - 1 and
/// alpha = 1 / sqrt(c^2 + 4). The convolution integrates the piecewise-linear
/// interpolant exactly against the exponential weights, closed by the
/// exponential left tail and the constant right tail.
double n1_identity_check(const GridProfile& w, const OperatorConfig& cfg);

/// Least-squares slope of ln g over nodes with 10 g_floor <= g <= 1e-3,
/// g_floor the first node value (or the smallest positive value).
double tail_slope(const GridProfile& g);

/// First abscissa at which the linear interpolant reaches `level`.
double level_crossing(const GridProfile& g, double level = 0.5);

struct UniquenessResult {
    double defect = 0.0;  // sup |w1(t) - w2(t + offset)| on the overlap
    double offset = 0.0;  // measured offset of the 0.5 crossings
    double requested_shift = 0.0;
    IterationReport first;
    IterationReport second;
};

/// Solves from phi_+ and from phi_+ translated by `shift_delays` delays,
/// aligns the two fronts at their 0.5 crossings and compares them.
UniquenessResult uniqueness_check(const ModelParams& p, const SolveOptions& opts = {},
                                  double shift_delays = 3.0);

struct CriticalReport {
    double c_star = 0.0;
    std::vector<int> ks;
    std::vector<double> speeds;
    std::vector<GridProfile> profiles;  // normalised: 0.5 crossing at t = 0
    std::vector<bool> monotone;
    std::vector<double> cauchy_diffs;   // between consecutive profiles
    bool failed = false;
    IterationReport last;
};

/// Fronts at c_k = c_*(tau) (1 + 2^-k), k = 2..k_max, each translated so
/// that w crosses 0.5 at t = 0. Subproblem failures mark the report failed.
CriticalReport critical_solve(double b, double tau, const SolveOptions& opts = {}, int k_max = 6);

/// sup |f(t) - g(t)| over the nodes of f lying within the node range of g.
double sup_difference(const GridProfile& f, const GridProfile& g);

}  // namespace kppfront
