// Command-line front end: roots, curves, solve, validate, evolve.
//
// Exit codes: 0 success, 1 numeric failure, 2 invalid input.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kppfront/bounds.hpp"
#include "kppfront/curves.hpp"
#include "kppfront/errors.hpp"
#include "kppfront/evolver.hpp"
#include "kppfront/profile_io.hpp"
#include "kppfront/solver.hpp"

using namespace kppfront;

namespace {

constexpr int kExitNumeric = 1;
constexpr int kExitInvalid = 2;

struct Common {
    double b = 0.0;
    double tau = 1.0;
    double c = 2.0;
    std::string format = "report";
    std::string out;
};

void emit(const Report& r, const std::string& format, std::ostream& os) {
    if (format == "csv") {
        const auto& e = r.entries();
        for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i].first;
        os << '\n';
        for (std::size_t i = 0; i < e.size(); ++i) {
            const bool quote = e[i].second.find(',') != std::string::npos;
            os << (i ? "," : "") << (quote ? "\"" : "") << e[i].second << (quote ? "\"" : "");
        }
        os << '\n';
    } else {
        r.write(os);
    }
}

void add_optional(Report& r, const std::string& key, const std::optional<double>& v) {
    if (v) {
        r.add(key, *v);
    } else {
        r.add(key, "none");
    }
}

int cmd_roots(const Common& o) {
    const ModelParams p = ModelParams::make(o.b, o.tau, o.c);
    const SpectralRoots s = spectral_roots(p);
    Report r;
    r.add("b", p.b);
    r.add("tau", p.tau);
    r.add("c", p.c);
    add_optional(r, "lambda1", s.lambda1);
    add_optional(r, "lambda2", s.lambda2);
    add_optional(r, "mu1", s.mu1);
    add_optional(r, "mu2", s.mu2);
    r.add("has_chi0_roots", s.has_chi0_roots());
    r.add("has_chi1_roots", s.has_chi1_roots());
    r.add("critical_chi0", s.critical_chi0);
    r.add("critical_chi1", s.critical_chi1);
    r.add("in_domain", s.has_chi0_roots() && s.has_chi1_roots());
    if (s.lambda1) r.add("chi0_residual_lambda1", chi0(*s.lambda1, p));
    if (s.lambda2) r.add("chi0_residual_lambda2", chi0(*s.lambda2, p));
    if (s.mu1) r.add("chi1_residual_mu1", chi1(*s.mu1, p));
    if (s.mu2) r.add("chi1_residual_mu2", chi1(*s.mu2, p));
    emit(r, o.format, std::cout);
    return 0;
}

struct CurvesArgs {
    double tau_min = 0.05;
    double tau_max = 2.0;
    int samples = 40;
    double tol = kCurveTol;
};

int cmd_curves(const Common& o, const CurvesArgs& a) {
    if (!(a.tau_min > 0.0 && a.tau_max >= a.tau_min)) throw ValidationError("need 0 < tau-min <= tau-max");
    if (a.samples < 1) throw ValidationError("samples must be >= 1");
    if (!(o.b >= 0.0 && o.b < 1.0)) throw ValidationError("b must satisfy 0 <= b < 1");
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) throw ValidationError("cannot open " + o.out + " for writing");
    }
    std::ostream& os = o.out.empty() ? std::cout : file;
    os << "# b=" << format_real(o.b) << '\n'
       << "# curve_tol=" << format_real(a.tol) << '\n'
       << "# tau_critical=" << format_real(tau_critical(o.b)) << '\n'
       << "tau,c_star,lambda_double,c_hash,mu_double\n";
    for (int i = 0; i < a.samples; ++i) {
        const double tau =
            a.samples == 1 ? a.tau_min : a.tau_min + (a.tau_max - a.tau_min) * i / (a.samples - 1);
        const CurveSample cs = c_star(tau, o.b, a.tol);
        os << format_real(tau) << ',' << format_real(cs.c) << ',' << format_real(cs.double_root) << ',';
        std::optional<CurveSample> ch;
        try {
            ch = c_hash(tau, o.b, a.tol);
        } catch (const NumericError&) {
            // Unbounded just above tau(b): left empty like an absent value.
        }
        if (ch) os << format_real(ch->c) << ',' << format_real(ch->double_root);
        else os << ',';
        os << '\n';
    }
    return 0;
}

int out_of_domain(const ModelParams& p) {
    const DomainVerdict v = in_domain(p);
    Report r;
    r.add("in_domain", v.in_domain);
    r.add("c_star", v.c_star_at_tau);
    if (v.c_hash_at_tau) r.add("c_hash", *v.c_hash_at_tau);
    else r.add("c_hash", "none");
    r.add("tau_critical", v.tau_critical);
    r.add("critical_chi0", v.roots.critical_chi0);
    r.write(std::cerr);
    std::cerr << "error: parameters are outside the existence domain or at the critical speed\n";
    return kExitInvalid;
}

int cmd_solve(const Common& o, const SolveOptions& opts) {
    const ModelParams p = ModelParams::make(o.b, o.tau, o.c);
    const SpectralRoots s = spectral_roots(p);
    if (!s.has_chi0_roots() || !s.has_chi1_roots() || s.critical_chi0) return out_of_domain(p);
    const IterationReport rep = solve_front(p, opts);
    Report r;
    append_iteration_report(r, rep);
    if (!o.out.empty()) {
        save_profile(o.out + "_w.csv", rep.profile_w, p, "w");
        save_profile(o.out + "_u.csv", rep.profile_u, p, "u");
        r.add("profile_w", o.out + "_w.csv");
        r.add("profile_u", o.out + "_u.csv");
        std::ofstream rf(o.out + "_report.txt");
        r.write(rf);
    }
    emit(r, o.format, std::cout);
    return rep.ok() ? 0 : kExitNumeric;
}

// Accepts either stored kind and returns w; u = (1 - b) B w inverts to
// w = (u - b S u) / (1 - b).
GridProfile as_w(const ProfileFile& f, const OperatorConfig& cfg) {
    if (f.kind == "w") return f.profile;
    if (f.kind != "u") throw ValidationError("profile kind must be 'w' or 'u', got '" + f.kind + "'");
    const GridProfile su = shift(f.profile, cfg);
    GridProfile w = f.profile;
    const double b = cfg.params.b;
    for (std::size_t i = 0; i < w.size(); ++i) w.values[i] = (f.profile.values[i] - b * su.values[i]) / (1.0 - b);
    w.right_value = (f.profile.right_value - b * f.profile.right_value) / (1.0 - b);
    return w;
}

GridProfile as_u(const GridProfile& w, const OperatorConfig& cfg) {
    GridProfile u = resolvent_B(w, cfg);
    for (double& v : u.values) v *= 1.0 - cfg.params.b;
    u.right_value *= 1.0 - cfg.params.b;
    return u;
}

void check_header(const char* name, const CLI::Option* opt, double flag, double header) {
    if (opt->count() == 0) return;
    if (std::abs(flag - header) > 1e-12 * std::max(1.0, std::abs(header))) {
        throw ValidationError(std::string("--") + name + " = " + format_real(flag) +
                              " disagrees with the profile header value " + format_real(header));
    }
}

struct HeaderFlags {
    const CLI::Option* b = nullptr;
    const CLI::Option* tau = nullptr;
    const CLI::Option* c = nullptr;
};

ProfileFile load_checked(const std::string& path, const Common& o, const HeaderFlags& f) {
    ProfileFile pf = load_profile(path);
    check_header("b", f.b, o.b, pf.params.b);
    check_header("tau", f.tau, o.tau, pf.params.tau);
    check_header("c", f.c, o.c, pf.params.c);
    return pf;
}

int cmd_validate(const std::string& path, const Common& o, const HeaderFlags& flags) {
    const ProfileFile pf = load_checked(path, o, flags);
    const ModelParams& p = pf.params;
    const OperatorConfig cfg = make_operator_config(p, pf.profile.m);
    check_alignment(pf.profile, cfg);
    const GridProfile w = as_w(pf, cfg);
    const GridProfile u = pf.kind == "u" ? pf.profile : as_u(w, cfg);

    double min_fd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < w.size(); ++i) min_fd = std::min(min_fd, w.values[i + 1] - w.values[i]);
    double pew = 0.0;
    for (double v : residual_pew(w, cfg, Stencil::fourth_order).values) pew = std::max(pew, std::abs(v));
    const double pe = residual_pe(u, cfg);
    const double n1 = n1_identity_check(w, cfg);
    const SpectralRoots s = spectral_roots(p);
    double slope = std::numeric_limits<double>::quiet_NaN();
    try {
        slope = tail_slope(w);
    } catch (const ValidationError&) {
    }

    const bool mono_ok = min_fd >= -1e-9;
    const bool pew_ok = pew <= 1e-4;
    const bool pe_ok = pe <= 1e-3;
    const bool n1_ok = n1 <= 5e-4;
    const bool tail_ok = s.lambda2 && std::isfinite(slope) && std::abs(slope / *s.lambda2 - 1.0) <= 0.02;

    Report r;
    r.add("profile", path);
    r.add("kind", pf.kind);
    r.add("min_forward_difference", min_fd);
    r.add("monotone", mono_ok ? "pass" : "fail");
    r.add("residual_pew_sup", pew);
    r.add("residual_pew", pew_ok ? "pass" : "fail");
    r.add("residual_pe_sup", pe);
    r.add("residual_pe", pe_ok ? "pass" : "fail");
    r.add("n1_identity_defect", n1);
    r.add("n1_identity", n1_ok ? "pass" : "fail");
    r.add("tail_slope", slope);
    add_optional(r, "lambda2", s.lambda2);
    r.add("tail", tail_ok ? "pass" : "fail");
    const bool all = mono_ok && pew_ok && pe_ok && n1_ok && tail_ok;
    r.add("all", all ? "pass" : "fail");
    emit(r, o.format, std::cout);
    return all ? 0 : kExitNumeric;
}

int cmd_evolve(const std::string& path, const Common& o, const HeaderFlags& flags, const EvolveOptions& eo) {
    const ProfileFile pf = load_checked(path, o, flags);
    const ModelParams& p = pf.params;
    const OperatorConfig cfg = make_operator_config(p, pf.profile.m);
    check_alignment(pf.profile, cfg);
    const GridProfile u = pf.kind == "u" ? pf.profile : as_u(pf.profile, cfg);
    const EvolveResult res = evolve(u, p, eo);

    Report r;
    r.add("b", p.b);
    r.add("tau", p.tau);
    r.add("c", p.c);
    r.add("horizon", eo.horizon);
    r.add("dx", eo.dx);
    r.add("dt_time", res.dt_time);
    r.add("delay_steps", res.delay_steps);
    r.add("x_lo", res.x_lo);
    r.add("x_hi", res.x_hi);
    r.add("speed", res.speed);
    r.add("speed_relative_error", res.speed / p.c - 1.0);
    r.add("shape_error", res.shape_error);
    r.add("min_u", res.min_u);
    r.add("max_u", res.max_u);
    r.add("min_boundary_distance", res.min_boundary_distance);
    if (!o.out.empty()) {
        std::ofstream fs(o.out + "_fronts.csv");
        fs << "t,front\n";
        for (const auto& [t, xf] : res.fronts) fs << format_real(t) << ',' << format_real(xf) << '\n';
        std::ofstream ss(o.out + "_final.csv");
        ss << "x,u\n";
        for (std::size_t i = 0; i < res.x.size(); ++i) ss << format_real(res.x[i]) << ',' << format_real(res.final_u[i]) << '\n';
        r.add("fronts_csv", o.out + "_fronts.csv");
        r.add("final_csv", o.out + "_final.csv");
    }
    emit(r, o.format, std::cout);
    return 0;
}

void add_params(CLI::App* cmd, Common& o, HeaderFlags* flags) {
    auto* b = cmd->add_option("--b", o.b, "neutral coefficient, 0 <= b < 1");
    auto* tau = cmd->add_option("--tau", o.tau, "delay tau > 0");
    auto* c = cmd->add_option("--c", o.c, "wave speed c > 0");
    if (flags) *flags = {b, tau, c};
}

void add_format(CLI::App* cmd, Common& o) {
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"report", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monotone traveling fronts of the neutral KPP-Fisher delay equation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key-value config file (sections per subcommand)");

    Common o;
    CurvesArgs ca;
    SolveOptions so;
    EvolveOptions eo;
    std::string profile_path;
    HeaderFlags validate_flags, evolve_flags;

    auto* roots = app.add_subcommand("roots", "zeros of the characteristic functions");
    add_params(roots, o, nullptr);
    add_format(roots, o);

    auto* curves = app.add_subcommand("curves", "CSV sweep of c_*(tau) and c_#(tau)");
    curves->add_option("--b", o.b, "neutral coefficient");
    curves->add_option("--tau-min", ca.tau_min, "first tau");
    curves->add_option("--tau-max", ca.tau_max, "last tau");
    curves->add_option("--samples", ca.samples, "number of tau samples");
    curves->add_option("--tol", ca.tol, "bisection tolerance on c");
    curves->add_option("--out", o.out, "CSV path (stdout when empty)");

    auto* solve = app.add_subcommand("solve", "monotone iteration for the front profile");
    add_params(solve, o, nullptr);
    solve->add_option("--T", so.T, "half-width of [-T, T] (0: 40 / min(lambda2, |mu1|))");
    solve->add_option("--m", so.m, "grid steps per delay c tau");
    solve->add_option("--tol", so.tol, "sup-norm stopping tolerance");
    solve->add_option("--max-iters", so.max_iters, "iteration cap");
    solve->add_option("--out", o.out, "prefix for <out>_w.csv, <out>_u.csv, <out>_report.txt");
    add_format(solve, o);

    auto* validate = app.add_subcommand("validate", "recheck a stored profile");
    validate->add_option("profile", profile_path, "profile file")->required();
    add_params(validate, o, &validate_flags);
    add_format(validate, o);

    auto* ev = app.add_subcommand("evolve", "time-integrate the PDE from a stored profile");
    ev->add_option("profile", profile_path, "profile file")->required();
    add_params(ev, o, &evolve_flags);
    ev->add_option("--horizon", eo.horizon, "time horizon");
    ev->add_option("--dx", eo.dx, "spatial step");
    ev->add_option("--dt-time", eo.dt_time, "time step (0: largest stable divisor of tau)");
    ev->add_option("--out", o.out, "prefix for <out>_fronts.csv and <out>_final.csv");
    add_format(ev, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInvalid;
    }

    try {
        if (*roots) return cmd_roots(o);
        if (*curves) return cmd_curves(o, ca);
        if (*solve) return cmd_solve(o, so);
        if (*validate) return cmd_validate(profile_path, o, validate_flags);
        if (*ev) return cmd_evolve(profile_path, o, evolve_flags, eo);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitInvalid;
}
