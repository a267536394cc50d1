#include "fracguide/aiming.hpp"
#include "fracguide/cli.hpp"
#include "fracguide/scenario.hpp"
#include "fracguide/trajectory_csv.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fracguide;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "fracguide_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate of the built-in example writes 10001 rows and metadata") {
    const fs::path csv = scratch("example.csv");
    const Run r = cli({"simulate", "--builtin", "paper", "--seed", "42", "--out", csv.string()});
    CHECK(r.code == kExitOk);
    const TrajectoryTable t = read_trajectory_csv(csv.string());
    CHECK(t.grid.size() == 10001);
    const Metadata meta = read_metadata(csv.string() + ".meta");
    CHECK(meta.at("seed") == "42");
    CHECK(meta.at("nodes") == "10001");
    CHECK(meta.count("deviation_sup") == 1);
    CHECK(meta.count("bound_rhs") == 1);
    CHECK(std::stod(meta.at("K")) == doctest::Approx(oracle::kPaperK).epsilon(1e-12));
    CHECK(meta.at("controls_in_sets") == "true");

    const Run check = cli({"check-lyapunov", csv.string()});
    CHECK(check.code == kExitOk);
    CHECK(check.out.find("alpha = 0.5") != std::string::npos);
}

TEST_CASE("same seed gives byte-identical CSV, other seeds differ") {
    const fs::path a = scratch("a.csv");
    const fs::path b = scratch("b.csv");
    const fs::path c = scratch("c.csv");
    CHECK(cli({"simulate", "--builtin", "paper", "--seed", "9", "--step", "0.01", "--out", a.string()}).code == 0);
    CHECK(cli({"simulate", "--builtin", "paper", "--seed", "9", "--step", "0.01", "--out", b.string()}).code == 0);
    CHECK(cli({"simulate", "--builtin", "paper", "--seed", "10", "--step", "0.01", "--out", c.string()}).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) != slurp(c));
}

TEST_CASE("constants passes theorem_constants through") {
    const Run r = cli({"constants", "--builtin", "paper", "--eps", "0.1"});
    REQUIRE(r.code == kExitOk);
    const AimingConfig c = scenario_paper_example();
    const TheoremConstants k = theorem_constants(c.dyn, c.alpha, c.horizon, 1.0, 0.1);
    std::istringstream lines(r.out);
    Metadata printed;
    for (std::string line; std::getline(lines, line);) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos) printed[line.substr(0, eq)] = line.substr(eq + 3);
    }
    CHECK(std::stod(printed.at("K")) == doctest::Approx(k.K).epsilon(1e-9));
    CHECK(std::stod(printed.at("eta")) == doctest::Approx(k.eta).epsilon(1e-9));
    CHECK(std::stod(printed.at("delta")) == doctest::Approx(k.delta).epsilon(1e-9));
    CHECK(printed.at("R0") == "1");
}

TEST_CASE("sweep prints one row per diameter") {
    const fs::path out = scratch("sweep.csv");
    const Run r = cli({"sweep", "--builtin", "paper", "--diameters", "0.05,0.1", "--out", out.string()});
    REQUIRE(r.code == kExitOk);
    const std::string table = slurp(out);
    CHECK(table.rfind("delta,deviation_sup,deviation_final\n0.1,", 0) == 0);
    CHECK(table.find("\n0.05,") != std::string::npos);
}

TEST_CASE("scenario files and overrides") {
    const fs::path scn = scratch("small.scn");
    Scenario s = paper_scenario(3);
    s.step = 0.05;
    s.csv_path = scratch("small.csv").string();
    spit(scn, write_scenario(s));
    CHECK(cli({"simulate", scn.string()}).code == kExitOk);
    CHECK(fs::exists(s.csv_path));
    CHECK(fs::exists(s.csv_path + ".meta"));
    const Run same = cli({"simulate", scn.string(), "--x0=0,1", "--out", scratch("same.csv").string()});
    CHECK(same.code == kExitOk);
    CHECK(read_metadata(scratch("same.csv").string() + ".meta").at("deviation_sup") != "");
}

TEST_CASE("exit codes on crafted bad inputs") {
    CHECK(cli({}).code == kExitParse);
    CHECK(cli({"frobnicate"}).code == kExitParse);
    CHECK(cli({"simulate"}).code == kExitParse);
    CHECK(cli({"simulate", "--builtin", "moon"}).code == kExitParse);
    CHECK(cli({"simulate", "/nonexistent.scn"}).code == kExitParse);

    const fs::path bad = scratch("bad.scn");
    spit(bad, "fracguide-scenario v1\n[order]\nalpha = 2\n");
    const Run r = cli({"simulate", bad.string()});
    CHECK(r.code == kExitParse);
    CHECK(r.err.find("line 3") != std::string::npos);

    Scenario nan = paper_scenario(1);
    nan.step = 0.05;
    nan.drift[0] = "0/0";
    const fs::path nan_file = scratch("nan.scn");
    spit(nan_file, write_scenario(nan));
    CHECK(cli({"simulate", nan_file.string(), "--out", scratch("nan.csv").string()}).code == kExitNumeric);

    const fs::path junk = scratch("junk.csv");
    spit(junk, "t,x_1,y_1,dev\n0,1,zz,0\n");
    CHECK(cli({"check-lyapunov", junk.string()}).code == kExitParse);
    CHECK(cli({"check-lyapunov", junk.string(), "--alpha", "1.5"}).code == kExitParse);
    CHECK(cli({"constants", "--builtin", "paper", "--eps", "-1"}).code == kExitParse);
    CHECK(cli({"sweep", "--builtin", "paper", "--diameters", "0,-1"}).code == kExitParse);
}

TEST_CASE("check-lyapunov reports violations with exit 4") {
    const fs::path csv = scratch("short.csv");
    REQUIRE(cli({"simulate", "--builtin", "paper", "--step", "0.05", "--out", csv.string()}).code == 0);
    // A negative tolerance turns the zero-margin nodes into violations.
    const Run r = cli({"check-lyapunov", csv.string(), "--tol", "-1"});
    CHECK(r.code == kExitViolation);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("selftest and help") {
    const Run r = cli({"selftest"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(cli({"--help"}).code == kExitOk);
}

}  // TEST_SUITE
