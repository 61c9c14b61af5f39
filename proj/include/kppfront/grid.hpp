#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kppfront/spectral.hpp"

namespace kppfront {

/// How a profile continues to the left of its first node.
enum class LeftTail {
    exponential,  // g(t) = g(t_start) exp(left_rate (t - t_start))
    zero,
};

/// Real function sampled on a uniform grid t_i = t_start + i dt, with
/// dt = c tau / m so that the delay c tau is exactly m steps. Beyond the
/// right end the profile is the constant right_value.
struct GridProfile {
    double t_start = 0.0;
    double dt = 1.0;
    int m = 1;
    std::vector<double> values;
    double left_rate = 0.0;
    double right_value = 0.0;
    LeftTail left_tail = LeftTail::exponential;

    std::size_t size() const { return values.size(); }
    double t(std::ptrdiff_t i) const { return t_start + static_cast<double>(i) * dt; }
    double t_end() const { return t(static_cast<std::ptrdiff_t>(values.size()) - 1); }

    /// Value at node index k, which may lie outside [0, n).
    double at(std::ptrdiff_t k) const;

    /// Linear interpolation at an arbitrary abscissa, extensions outside.
    double sample(double t) const;

    /// Same grid and tails, new values.
    GridProfile with_values(std::vector<double> v) const;
};

/// Uniform node layout; `symmetric` builds [-N dt, N dt] with N dt >= T.
struct GridSpec {
    double t_start = 0.0;
    double dt = 1.0;
    std::size_t n = 0;
    int m = 1;

    static GridSpec symmetric(double half_width, double ctau, int m);
};

/// Discrete operator setup: steps per delay and series depth.
struct OperatorConfig {
    ModelParams params;
    int m = 16;
    int depth = 0;  // J: terms j = 0..J of sum_j b^j S^j

    double dt() const { return params.ctau / m; }
};

OperatorConfig make_operator_config(const ModelParams& p, int m);

/// Throws ValidationError unless g.m == cfg.m and g.dt * m == c tau.
void check_alignment(const GridProfile& g, const OperatorConfig& cfg);

/// (Sg)(t) = g(t - c tau), i.e. (Sg)_i = g_{i-m}.
GridProfile shift(const GridProfile& g, const OperatorConfig& cfg);

/// Bg = sum_{j=0}^{J} b^j S^j g, the truncated resolvent (I - bS)^{-1}.
GridProfile resolvent_B(const GridProfile& g, const OperatorConfig& cfg);

/// L = S B.
GridProfile op_L(const GridProfile& g, const OperatorConfig& cfg);

/// F(g) = Bg (1 - (1 - b) SBg).
GridProfile op_F(const GridProfile& g, const OperatorConfig& cfg);

/// min over the grid of F(high) - F(low) + L(high - low). Requires
/// 0 <= low <= high <= 1 on the nodes and on both tails.
double qm_defect(const GridProfile& low, const GridProfile& high, const OperatorConfig& cfg);

}  // namespace kppfront
