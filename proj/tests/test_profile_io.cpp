#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "kppfront/errors.hpp"
#include "kppfront/profile_io.hpp"

using namespace kppfront;

namespace {

GridProfile sample_profile() {
    GridProfile g;
    g.t_start = -1.2;
    g.dt = 0.6 / 16;
    g.m = 16;
    g.left_rate = 0.46477631783719944;
    g.right_value = 1.0;
    for (int i = 0; i < 65; ++i) g.values.push_back(1.0 / (1.0 + std::exp(-g.t(i))) + 1e-17 * i);
    return g;
}

}  // namespace

TEST_CASE("format_real round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.46477631783719944}) {
        CHECK(std::stod(format_real(v)) == v);
    }
}

TEST_CASE("profile files round-trip bit for bit") {
    const auto p = ModelParams::make(0.2, 0.2, 3.0);
    const GridProfile g = sample_profile();
    std::stringstream ss;
    write_profile(ss, g, p, "w");
    const ProfileFile f = read_profile(ss);
    CHECK(f.kind == "w");
    CHECK(f.params.b == p.b);
    CHECK(f.params.tau == p.tau);
    CHECK(f.params.c == p.c);
    CHECK(f.profile.m == g.m);
    CHECK(f.profile.t_start == g.t_start);
    CHECK(f.profile.dt == g.dt);
    CHECK(f.profile.left_rate == g.left_rate);
    CHECK(f.profile.right_value == g.right_value);
    CHECK(f.profile.values == g.values);
}

TEST_CASE("malformed profile files") {
    const auto p = ModelParams::make(0.2, 0.2, 3.0);
    std::stringstream ok;
    write_profile(ok, sample_profile(), p, "u");
    const std::string text = ok.str();

    SUBCASE("missing header key") {
        std::string t = text;
        t.erase(t.find("# dt="), t.find('\n', t.find("# dt=")) - t.find("# dt=") + 1);
        std::istringstream is(t);
        CHECK_THROWS_AS(read_profile(is), ValidationError);
    }
    SUBCASE("row count mismatch") {
        std::istringstream is(text + "9,0.5\n");
        CHECK_THROWS_AS(read_profile(is), ValidationError);
    }
    SUBCASE("bad number") {
        std::string t = text;
        t.replace(t.rfind(',') + 1, 3, "abc");
        std::istringstream is(t);
        CHECK_THROWS_AS(read_profile(is), ValidationError);
    }
    SUBCASE("invalid parameters") {
        std::string t = text;
        t.replace(t.find("# b=0.2"), 7, "# b=1.5");
        std::istringstream is(t);
        CHECK_THROWS_AS(read_profile(is), ValidationError);
    }
}

TEST_CASE("reports") {
    Report r;
    r.add("alpha", 0.1);
    r.add("n", 3);
    r.add("flag", true);
    r.add("name", "front");
    r.add("list", std::vector<double>{1.0, 0.5});
    std::stringstream ss;
    r.write(ss);
    const auto m = parse_report(ss);
    CHECK(m.at("alpha") == "0.10000000000000001");
    CHECK(m.at("n") == "3");
    CHECK(m.at("flag") == "true");
    CHECK(m.at("name") == "front");
    CHECK(m.at("list") == "1,0.5");
}
