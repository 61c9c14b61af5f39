#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kppfront/grid.hpp"
#include "kppfront/solver.hpp"
#include "kppfront/spectral.hpp"

namespace kppfront {

/// Round-trip decimal formatting (17 significant digits).
std::string format_real(double v);

/// Profile file: `# key=value` header lines (b, tau, c, m, t_start, dt, n,
/// left_rate, right_value, left_tail, kind) followed by headerless `t,value` rows.
struct ProfileFile {
    ModelParams params;
    GridProfile profile;
    std::string kind;  // "w" or "u"
};

void write_profile(std::ostream& os, const GridProfile& g, const ModelParams& p, const std::string& kind);
void save_profile(const std::string& path, const GridProfile& g, const ModelParams& p, const std::string& kind);

/// Throws ValidationError on malformed headers, row counts or abscissae
/// that drift from t_start + i dt.
ProfileFile read_profile(std::istream& is);
ProfileFile load_profile(const std::string& path);

/// Ordered `key = value` lines.
class Report {
public:
    void add(const std::string& key, double v);
    void add(const std::string& key, int v);
    void add(const std::string& key, long v);
    void add(const std::string& key, bool v);
    void add(const std::string& key, const std::string& v);
    void add(const std::string& key, const char* v) { add(key, std::string(v)); }
    void add(const std::string& key, const std::vector<double>& v);

    void write(std::ostream& os) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::map<std::string, std::string> parse_report(std::istream& is);

/// Every IterationReport field except the profiles themselves.
void append_iteration_report(Report& r, const IterationReport& rep);

}  // namespace kppfront
