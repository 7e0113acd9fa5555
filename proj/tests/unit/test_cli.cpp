#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "cuspforge/error.hpp"
#include "cuspforge/field_io.hpp"
#include "doctest.h"
#include "exports.hpp"
#include "suites.hpp"
#include "svg.hpp"

using namespace cuspforge;
using namespace cuspforge::cli;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("cuspforge_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "cuspforge");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("manifest round trip keeps order and values") {
    Manifest m;
    m.set("command", "generate-onephase");
    m.set("r", 0.1);
    m.set("grid_res", 257);
    m.set("r", 0.5);
    const Manifest back = Manifest::parse(m.render());
    REQUIRE(back.entries().size() == 3);
    CHECK(back.entries()[0].first == "command");
    CHECK(back.entries()[1].first == "r");
    CHECK(back.number("r") == 0.5);
    CHECK(back.number("grid_res") == 257);
    CHECK(!back.get("missing"));
    CHECK_THROWS(back.require("missing"));
}

TEST_CASE("config parsing") {
    const fs::path dir = scratch("config");
    std::ofstream(dir / "c.cfg") << "# comment\n nonlinearity = quadratic \n\nh=0.0078125\n";
    const auto cfg = read_config(dir / "c.cfg");
    CHECK(cfg.at("nonlinearity") == "quadratic");
    CHECK(cfg.at("h") == "0.0078125");
    CHECK(cfg.size() == 2);
}

TEST_CASE("boundary and eta csv round trip") {
    const fs::path dir = scratch("boundary");
    FreeBoundaryCurve c;
    c.xs = {-0.2, -0.1, 0.0, 0.1};
    c.fs = {0.3 / 7, 0.01, 0.0, 0.0};
    c.contact = {0, 0, 1, 1};
    write_boundary(dir / "b.csv", c);
    const FreeBoundaryCurve r = read_boundary(dir / "b.csv");
    CHECK(r.xs == c.xs);
    CHECK(r.fs == c.fs);
    CHECK(r.contact == c.contact);

    EtaMap e;
    e.xs = {-0.1, -0.05, 0.0};
    e.etas = {-0.11, -1.0 / 19, 0.0};
    write_eta(dir / "e.csv", e);
    const EtaMap re = read_eta(dir / "e.csv");
    CHECK(re.xs == e.xs);
    CHECK(re.etas == e.etas);
}

TEST_CASE("suite result bookkeeping") {
    SuiteResult s;
    s.suite = "demo";
    s.at_most("small", 1e-4, 1e-3);
    s.within("order", 1.5, 1.45, 1.55);
    CHECK(s.passed());
    s.at_least("big", 0.2, 1.0);
    s.truth("flag", true);
    CHECK(!s.passed());
    REQUIRE(s.first_failure());
    CHECK(s.first_failure()->name == "big");
    const std::string text = s.render();
    CHECK(text.find("FAIL big") != std::string::npos);
    CHECK(text.find("PASS order") != std::string::npos);
    SuiteResult nan;
    nan.at_most("nan", std::nan(""), 1.0);
    CHECK(!nan.passed());
}

TEST_CASE("svg output is well formed") {
    const std::string a = svg_polylines({{{0, 1, 2}, {1, 0, 1}, "#000", "f"}}, "t");
    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a.find("</svg>") != std::string::npos);
    const Grid g(0, 1, 0, 1, 3, 3);
    const std::string b = svg_heatmap(ScalarField(g, 1.0), "x < y & z");
    CHECK(b.find("x &lt; y &amp; z") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}) == 2);
    CHECK(run({"no-such-command"}) == 2);
    const fs::path out = scratch("usage");
    CHECK(run({"generate-onephase", "--n", "1", "--r", "0.5", "--grid_res", "10", "--out_dir",
               (out / "g").string()}) == 2);
    const Manifest m = read_manifest(out / "g");
    CHECK(m.require("error_code") == "InvalidArgument");
    CHECK(m.require("exit_status") == "2");
    CHECK(run({"plot", "--target_dir", (out / "missing").string(), "--what", "boundary", "--out_svg",
               (out / "p.svg").string()}) == 2);
    CHECK(run({"verify", "--target_dir", (out / "missing").string(), "--suite", "all"}) == 2);
}

TEST_CASE("generate, verify and plot a one-phase run") {
    const fs::path out = scratch("onephase");
    const std::string dir = (out / "run").string();
    REQUIRE(run({"generate-onephase", "--n", "1", "--r", "0.5", "--grid_res", "257", "--out_dir", dir}) == 0);
    for (const char* f : {"u.csv", "v.csv", "V.csv", "boundary.csv", "eta.csv", "manifest.txt"})
        CHECK(fs::exists(fs::path(dir) / f));
    const Manifest m = read_manifest(dir);
    CHECK(m.number("boundary_exponent") >= 1.47);
    CHECK(m.number("boundary_exponent") <= 1.53);
    CHECK(run({"verify", "--target_dir", dir, "--suite", "all"}) == 0);
    CHECK(fs::exists(fs::path(dir) / "verify_report.txt"));
    CHECK(run({"plot", "--target_dir", dir, "--what", "exponent_fit", "--out_svg",
               (out / "fit.svg").string()}) == 0);
    const std::string svg = read_text(out / "fit.svg");
    CHECK(svg.find("slope = " + m.require("boundary_exponent")) != std::string::npos);
    CHECK(run({"plot", "--target_dir", dir, "--what", "boundary", "--out_svg",
               (out / "b.svg").string()}) == 0);
}

TEST_CASE("two-phase negative control fails verify") {
    const fs::path out = scratch("shifted");
    const std::string dir = (out / "run").string();
    run({"generate-twophase", "--kind", "shifted", "--n", "1", "--r", "0.5", "--grid_res", "129",
         "--out_dir", dir});
    REQUIRE(fs::exists(fs::path(dir) / "u_plus.csv"));
    CHECK(run({"verify", "--target_dir", dir, "--suite", "twophase"}) == 1);
    const std::string report = read_text(fs::path(dir) / "verify_report.txt");
    CHECK(report.find("FAIL separated |Q-| = 1") != std::string::npos);
}

TEST_CASE("flat obstacle config solves exactly") {
    const fs::path out = scratch("obstacle");
    std::ofstream(out / "flat.cfg") << "nonlinearity=rational_bernoulli\ndirichlet=flat\nh=0.0625\n";
    CHECK(run({"solve-obstacle", "--config_path", (out / "flat.cfg").string(), "--out_dir",
               (out / "run").string()}) == 0);
    const Manifest m = read_manifest(out / "run");
    CHECK(m.number("max_error") <= 1e-8);
    CHECK(m.number("kkt_interior") <= 1e-8);
    std::ofstream(out / "bad.cfg") << "nonlinearity=cubic\ndirichlet=flat\n";
    CHECK(run({"solve-obstacle", "--config_path", (out / "bad.cfg").string(), "--out_dir",
               (out / "bad").string()}) == 2);
}

TEST_CASE("obstacle solve on classical hodograph data reproduces w") {
    const fs::path out = scratch("hodograph_obstacle");
    const std::string gen = (out / "gen").string();
    REQUIRE(run({"generate-onephase", "--n", "1", "--r", "0.5", "--grid_res", "257", "--out_dir", gen}) == 0);
    std::ofstream(out / "w.cfg") << "nonlinearity=rational_bernoulli\ndirichlet=hodograph:" << gen << "\n";
    REQUIRE(run({"solve-obstacle", "--config_path", (out / "w.cfg").string(), "--out_dir",
                 (out / "run").string()}) == 0);
    const Manifest m = read_manifest(out / "run");
    CHECK(m.number("h") == doctest::Approx(1.0 / 128));
    CHECK(m.number("cross_check_residual") <= 2e-2);
    CHECK(m.number("feasibility_violations") == 0);
}
