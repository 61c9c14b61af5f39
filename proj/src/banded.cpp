#include "kppfront/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kppfront/errors.hpp"

namespace kppfront {

BandedLU::BandedLU(std::size_t n, std::size_t kl)
    : n_(n), kl_(kl), width_(kl + 2), band_(n * (kl + 2), 0.0) {
    if (n == 0) throw ValidationError("banded matrix must have at least one row");
}

double& BandedLU::at(std::size_t i, std::size_t j) {
    if (factored_) throw ValidationError("banded matrix already factored");
    if (i >= n_ || j >= n_ || j + kl_ < i || j > i + 1) {
        std::ostringstream os;
        os << "entry (" << i << ", " << j << ") outside the band";
        throw ValidationError(os.str());
    }
    return cell(i, j);
}

double BandedLU::get(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_ || j + kl_ < i || j > i + 1) return 0.0;
    return cell(i, j);
}

void BandedLU::factor(double rel_floor) {
    if (factored_) return;
    double scale = 0.0;
    for (double v : band_) scale = std::max(scale, std::abs(v));
    min_pivot_ = std::numeric_limits<double>::infinity();
    max_pivot_ = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
        const double piv = cell(k, k);
        const double mag = std::abs(piv);
        min_pivot_ = std::min(min_pivot_, mag);
        max_pivot_ = std::max(max_pivot_, mag);
        if (!(mag > rel_floor * scale)) {
            std::ostringstream os;
            os << "banded elimination: pivot " << piv << " at row " << k << " below " << rel_floor
               << " x max entry " << scale << " (system numerically singular)";
            throw NumericError(os.str());
        }
        if (k + 1 == n_) break;
        const double upper = cell(k, k + 1);
        const std::size_t last = std::min(n_ - 1, k + kl_);
        for (std::size_t i = k + 1; i <= last; ++i) {
            double& lik = cell(i, k);
            if (lik == 0.0) continue;
            lik /= piv;
            cell(i, k + 1) -= lik * upper;
        }
    }
    factored_ = true;
}

std::vector<double> BandedLU::solve(std::vector<double> rhs) const {
    if (!factored_) throw ValidationError("banded matrix must be factored before solve");
    if (rhs.size() != n_) throw ValidationError("right-hand side length does not match the matrix");
    for (std::size_t i = 1; i < n_; ++i) {
        const std::size_t first = i > kl_ ? i - kl_ : 0;
        double acc = rhs[i];
        const double* row = &band_[i * width_ + (first + kl_ - i)];
        for (std::size_t j = first; j < i; ++j) acc -= row[j - first] * rhs[j];
        rhs[i] = acc;
    }
    rhs[n_ - 1] /= cell(n_ - 1, n_ - 1);
    for (std::size_t i = n_ - 1; i-- > 0;) {
        rhs[i] = (rhs[i] - cell(i, i + 1) * rhs[i + 1]) / cell(i, i);
    }
    return rhs;
}

}  // namespace kppfront
