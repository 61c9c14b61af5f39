#pragma once

#include <cstddef>
#include <vector>

namespace kppfront {

/// Square matrix with lower bandwidth kl and upper bandwidth 1, factored
/// in place by Gaussian elimination without pivoting. The upper factor keeps
/// bandwidth 1, so factoring and solving cost O(n kl).
class BandedLU {
public:
    BandedLU(std::size_t n, std::size_t kl);

    std::size_t size() const { return n_; }
    std::size_t lower_bandwidth() const { return kl_; }

    /// Entry (i, j) with i - kl <= j <= i + 1. Only valid before factor().
    double& at(std::size_t i, std::size_t j);
    double get(std::size_t i, std::size_t j) const;

    /// Throws NumericError when a pivot falls below rel_floor times the
    /// largest row norm.
    void factor(double rel_floor = 1e-13);
    bool factored() const { return factored_; }

    std::vector<double> solve(std::vector<double> rhs) const;

    /// Pivot extremes seen during factor(), for conditioning diagnostics.
    double min_abs_pivot() const { return min_pivot_; }
    double max_abs_pivot() const { return max_pivot_; }

private:
    std::size_t n_;
    std::size_t kl_;
    std::size_t width_;
    std::vector<double> band_;  // row i holds columns [i - kl, i + 1]
    bool factored_ = false;
    double min_pivot_ = 0.0;
    double max_pivot_ = 0.0;

    double& cell(std::size_t i, std::size_t j) { return band_[i * width_ + (j + kl_ - i)]; }
    double cell(std::size_t i, std::size_t j) const { return band_[i * width_ + (j + kl_ - i)]; }
};

}  // namespace kppfront
