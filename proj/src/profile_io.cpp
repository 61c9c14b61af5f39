#include "kppfront/profile_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kppfront/errors.hpp"

namespace kppfront {

namespace {

double parse_real(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ValidationError("cannot parse " + what + " from '" + s + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_profile(std::ostream& os, const GridProfile& g, const ModelParams& p, const std::string& kind) {
    os << "# b=" << format_real(p.b) << '\n'
       << "# tau=" << format_real(p.tau) << '\n'
       << "# c=" << format_real(p.c) << '\n'
       << "# m=" << g.m << '\n'
       << "# t_start=" << format_real(g.t_start) << '\n'
       << "# dt=" << format_real(g.dt) << '\n'
       << "# n=" << g.size() << '\n'
       << "# left_rate=" << format_real(g.left_rate) << '\n'
       << "# right_value=" << format_real(g.right_value) << '\n'
       << "# left_tail=" << (g.left_tail == LeftTail::zero ? "zero" : "exponential") << '\n'
       << "# kind=" << kind << '\n';
    for (std::size_t i = 0; i < g.size(); ++i) {
        os << format_real(g.t(static_cast<std::ptrdiff_t>(i))) << ',' << format_real(g.values[i]) << '\n';
    }
}

void save_profile(const std::string& path, const GridProfile& g, const ModelParams& p, const std::string& kind) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot open " + path + " for writing");
    write_profile(os, g, p, kind);
}

ProfileFile read_profile(std::istream& is) {
    std::map<std::string, std::string> head;
    std::vector<std::pair<double, double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            head[trim(line.substr(1, eq - 1))] = trim(line.substr(eq + 1));
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ValidationError("profile line " + std::to_string(lineno) + " is not 't,value'");
        }
        rows.emplace_back(parse_real(line.substr(0, comma), "t"), parse_real(line.substr(comma + 1), "value"));
    }
    for (const char* key : {"b", "tau", "c", "m", "t_start", "dt", "n", "left_rate", "right_value"}) {
        if (!head.count(key)) throw ValidationError(std::string("profile header lacks '") + key + "'");
    }

    ProfileFile f;
    f.params = ModelParams::make(parse_real(head["b"], "b"), parse_real(head["tau"], "tau"),
                                 parse_real(head["c"], "c"));
    f.kind = head.count("kind") ? head["kind"] : "w";
    GridProfile& g = f.profile;
    const double m = parse_real(head["m"], "m");
    const double n = parse_real(head["n"], "n");
    if (m < 1 || m != std::floor(m)) throw ValidationError("header m must be a positive integer");
    if (n < 0 || n != std::floor(n)) throw ValidationError("header n must be a non-negative integer");
    g.m = static_cast<int>(m);
    g.t_start = parse_real(head["t_start"], "t_start");
    g.dt = parse_real(head["dt"], "dt");
    g.left_rate = parse_real(head["left_rate"], "left_rate");
    g.right_value = parse_real(head["right_value"], "right_value");
    if (head.count("left_tail")) {
        const std::string& lt = head["left_tail"];
        if (lt == "zero") {
            g.left_tail = LeftTail::zero;
        } else if (lt != "exponential") {
            throw ValidationError("unknown left_tail '" + lt + "'");
        }
    }
    if (!(g.dt > 0.0)) throw ValidationError("header dt must be positive");
    if (rows.size() != static_cast<std::size_t>(n)) {
        std::ostringstream os;
        os << "header n = " << n << " but the file has " << rows.size() << " rows";
        throw ValidationError(os.str());
    }
    g.values.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double expect = g.t(static_cast<std::ptrdiff_t>(i));
        if (std::abs(rows[i].first - expect) > 1e-9 * std::max(1.0, std::abs(expect))) {
            std::ostringstream os;
            os << "row " << i << " has t = " << rows[i].first << ", expected " << expect;
            throw ValidationError(os.str());
        }
        g.values.push_back(rows[i].second);
    }
    return f;
}

ProfileFile load_profile(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open profile " + path);
    return read_profile(is);
}

void Report::add(const std::string& key, double v) { entries_.emplace_back(key, format_real(v)); }
void Report::add(const std::string& key, int v) { entries_.emplace_back(key, std::to_string(v)); }
void Report::add(const std::string& key, long v) { entries_.emplace_back(key, std::to_string(v)); }
void Report::add(const std::string& key, bool v) { entries_.emplace_back(key, v ? "true" : "false"); }
void Report::add(const std::string& key, const std::string& v) { entries_.emplace_back(key, v); }

void Report::add(const std::string& key, const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_real(v[i]);
    }
    entries_.emplace_back(key, s);
}

void Report::write(std::ostream& os) const {
    for (const auto& [k, v] : entries_) os << k << " = " << v << '\n';
}

std::map<std::string, std::string> parse_report(std::istream& is) {
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(is, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 3));
    }
    return out;
}

void append_iteration_report(Report& r, const IterationReport& rep) {
    r.add("b", rep.params.b);
    r.add("tau", rep.params.tau);
    r.add("c", rep.params.c);
    r.add("T", rep.T);
    r.add("m", rep.m);
    r.add("dt", rep.dt);
    r.add("lambda2", rep.super_fn.lambda2);
    r.add("mu1", rep.super_fn.mu1);
    r.add("super_a", rep.super_fn.a);
    r.add("super_zeta", rep.super_fn.zeta);
    r.add("sub_eps", rep.sub_fn.eps);
    r.add("sub_M", rep.sub_fn.M);
    r.add("sub_xi", rep.sub_fn.xi);
    r.add("converged", rep.converged);
    r.add("iters", rep.iters);
    r.add("monotone_defect", rep.monotone_defect);
    r.add("min_forward_difference", rep.min_forward_difference);
    r.add("sandwich_defect", rep.sandwich_defect);
    r.add("residual_pew_sup", rep.residual_pew_sup);
    r.add("residual_pe_sup", rep.residual_pe_sup);
    r.add("n1_identity_defect", rep.n1_identity_defect);
    r.add("tail_slope", rep.tail_slope);
    r.add("min_abs_pivot", rep.min_abs_pivot);
    r.add("max_abs_pivot", rep.max_abs_pivot);
    r.add("invariants_ok", rep.ok());
    r.add("deltas", rep.deltas);
}

}  // namespace kppfront
