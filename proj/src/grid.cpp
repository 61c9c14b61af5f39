#include "kppfront/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kppfront/errors.hpp"

namespace kppfront {

double GridProfile::at(std::ptrdiff_t k) const {
    const auto n = static_cast<std::ptrdiff_t>(values.size());
    if (k >= 0 && k < n) return values[static_cast<std::size_t>(k)];
    if (k >= n) return right_value;
    if (left_tail == LeftTail::zero || values.empty()) return 0.0;
    return values.front() * std::exp(left_rate * static_cast<double>(k) * dt);
}

double GridProfile::sample(double t) const {
    if (values.empty()) throw ValidationError("sample on an empty profile");
    const double x = (t - t_start) / dt;
    const auto last = static_cast<double>(values.size() - 1);
    if (x < 0.0) {
        if (left_tail == LeftTail::zero) return 0.0;
        return values.front() * std::exp(left_rate * (t - t_start));
    }
    if (x > last) return right_value;
    const double k = std::round(x);
    if (std::abs(x - k) <= 1e-9) return values[static_cast<std::size_t>(k)];
    const auto i = static_cast<std::size_t>(std::floor(x));
    if (i + 1 >= values.size()) return values.back();
    const double f = x - static_cast<double>(i);
    return (1.0 - f) * values[i] + f * values[i + 1];
}

GridProfile GridProfile::with_values(std::vector<double> v) const {
    GridProfile out = *this;
    out.values = std::move(v);
    return out;
}

GridSpec GridSpec::symmetric(double half_width, double ctau, int m) {
    if (!(half_width > 0.0)) throw ValidationError("grid half-width must be positive");
    if (m < 1) throw ValidationError("steps per delay m must be >= 1");
    GridSpec g;
    g.m = m;
    g.dt = ctau / m;
    const auto half = static_cast<std::size_t>(std::ceil(half_width / g.dt - 1e-9));
    g.n = 2 * half + 1;
    g.t_start = -static_cast<double>(half) * g.dt;
    return g;
}

OperatorConfig make_operator_config(const ModelParams& p, int m) {
    if (m < 1) throw ValidationError("steps per delay m must be >= 1");
    OperatorConfig cfg;
    cfg.params = p;
    cfg.m = m;
    cfg.depth = p.series_depth();
    return cfg;
}

void check_alignment(const GridProfile& g, const OperatorConfig& cfg) {
    if (g.values.empty()) throw ValidationError("profile has no nodes");
    if (g.m != cfg.m) {
        std::ostringstream os;
        os << "profile has m = " << g.m << " but the operator uses m = " << cfg.m;
        throw ValidationError(os.str());
    }
    const double ctau = cfg.params.ctau;
    if (std::abs(g.dt * cfg.m - ctau) > 1e-12 * ctau) {
        std::ostringstream os;
        os.precision(17);
        os << "grid misaligned: dt * m = " << g.dt * cfg.m << " differs from c tau = " << ctau;
        throw ValidationError(os.str());
    }
}

GridProfile shift(const GridProfile& g, const OperatorConfig& cfg) {
    check_alignment(g, cfg);
    std::vector<double> out(g.size());
    const auto m = static_cast<std::ptrdiff_t>(cfg.m);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = g.at(static_cast<std::ptrdiff_t>(i) - m);
    return g.with_values(std::move(out));
}

GridProfile resolvent_B(const GridProfile& g, const OperatorConfig& cfg) {
    check_alignment(g, cfg);
    const double b = cfg.params.b;
    const auto m = static_cast<std::ptrdiff_t>(cfg.m);
    std::vector<double> out(g.size(), 0.0);
    double weight_sum = 0.0;
    double weight = 1.0;
    for (int j = 0; j <= cfg.depth; ++j) {
        const std::ptrdiff_t offset = j * m;
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += weight * g.at(static_cast<std::ptrdiff_t>(i) - offset);
        }
        weight_sum += weight;
        weight *= b;
    }
    GridProfile r = g.with_values(std::move(out));
    r.right_value = g.right_value * weight_sum;
    return r;
}

GridProfile op_L(const GridProfile& g, const OperatorConfig& cfg) {
    return shift(resolvent_B(g, cfg), cfg);
}

GridProfile op_F(const GridProfile& g, const OperatorConfig& cfg) {
    const double one_minus_b = 1.0 - cfg.params.b;
    const GridProfile bg = resolvent_B(g, cfg);
    const GridProfile sbg = shift(bg, cfg);
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = bg.values[i] * (1.0 - one_minus_b * sbg.values[i]);
    }
    GridProfile r = g.with_values(std::move(out));
    r.right_value = bg.right_value * (1.0 - one_minus_b * bg.right_value);
    return r;
}

double qm_defect(const GridProfile& low, const GridProfile& high, const OperatorConfig& cfg) {
    check_alignment(low, cfg);
    check_alignment(high, cfg);
    if (low.size() != high.size() || low.t_start != high.t_start || low.dt != high.dt ||
        low.left_tail != high.left_tail || low.left_rate != high.left_rate) {
        throw ValidationError("qm_defect: profiles live on different grids or tails");
    }
    for (std::size_t i = 0; i < low.size(); ++i) {
        if (!(low.values[i] >= 0.0 && low.values[i] <= high.values[i] && high.values[i] <= 1.0)) {
            std::ostringstream os;
            os << "qm_defect: ordering 0 <= low <= high <= 1 violated at node " << i;
            throw ValidationError(os.str());
        }
    }
    if (!(low.right_value >= 0.0 && low.right_value <= high.right_value && high.right_value <= 1.0)) {
        throw ValidationError("qm_defect: right tails are not ordered within [0, 1]");
    }

    const GridProfile fh = op_F(high, cfg);
    const GridProfile fl = op_F(low, cfg);
    const GridProfile lh = op_L(high, cfg);
    const GridProfile ll = op_L(low, cfg);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < low.size(); ++i) {
        const double d = (fh.values[i] - fl.values[i]) + (lh.values[i] - ll.values[i]);
        worst = std::min(worst, d);
    }
    return worst;
}

}  // namespace kppfront
