#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "stefanlie/cli.hpp"

namespace fs = std::filesystem;
using namespace stefanlie::cli;

namespace {

struct Outcome {
    int code = 0;
    std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "stefanlie");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Outcome o;
    const Parsed p = parse_args(static_cast<int>(argv.size()), argv.data(), out, err);
    o.code = p.config ? run(*p.config, out, err) : p.exit_code;
    o.out = out.str();
    o.err = err.str();
    return o;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("stefanlie_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("solve-tw writes headed CSVs") {
    const fs::path dir = scratch("tw");
    const Outcome o = invoke({"solve-tw", "--out", dir.string()});
    REQUIRE(o.code == ok);
    CHECK(o.out.find("mu = ") != std::string::npos);
    for (const char* f : {"tw_profile.csv", "tw_summary.csv"}) {
        const std::string text = slurp(dir / f);
        CHECK(std::regex_search(text, std::regex("^# stefanlie 0\\.1\\.0 config=[0-9a-f]{16}\n")));
    }
    CHECK(slurp(dir / "tw_summary.csv").find("mu,delta,delta_star,u_s,residual") != std::string::npos);
}

TEST_CASE("reruns are byte-identical and the hash tracks the config") {
    const fs::path a = scratch("rep_a"), b = scratch("rep_b"), c = scratch("rep_c");
    REQUIRE(invoke({"solve-tw", "--out", a.string()}).code == ok);
    REQUIRE(invoke({"solve-tw", "--out", b.string()}).code == ok);
    REQUIRE(invoke({"solve-tw", "--q0", "2e10", "--out", c.string()}).code == ok);
    CHECK(slurp(a / "tw_profile.csv") == slurp(b / "tw_profile.csv"));
    CHECK(slurp(a / "tw_summary.csv") == slurp(b / "tw_summary.csv"));
    const auto header = [](const std::string& s) { return s.substr(0, s.find('\n')); };
    CHECK(header(slurp(a / "tw_summary.csv")) != header(slurp(c / "tw_summary.csv")));
}

TEST_CASE("config errors exit 2 and write nothing") {
    const fs::path dir = scratch("bad");
    CHECK(invoke({"solve-tw", "--material", "/no/such/file.cfg", "--out", dir.string()}).code == config_error);
    CHECK(invoke({"solve-tw", "--set", "colour=3", "--out", dir.string()}).code == config_error);
    CHECK(invoke({"solve-tw", "--set", "Tinf=2000", "--out", dir.string()}).code == config_error);
    CHECK(invoke({"check", "table2-case-9", "--out", dir.string()}).code == config_error);
    CHECK(invoke({"check", "stefan", "--form", "weekly", "--out", dir.string()}).code == config_error);
    CHECK(invoke({"verify-fd", "--grids", "0", "--out", dir.string()}).code == config_error);
    CHECK(invoke({"no-such-command"}).code == config_error);
    CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("check reports the classification row") {
    const fs::path dir = scratch("check");
    const Outcome rod = invoke({"check", "rod", "--k=-2", "--gamma=1", "--q0=1", "--out", dir.string()});
    REQUIRE(rod.code == ok);
    CHECK(rod.out.find("classification: row 3") != std::string::npos);
    CHECK(fs::exists(dir / "check_report.txt"));
    CHECK(slurp(dir / "check_residuals.csv").find("family,item,condition,eps,residual") != std::string::npos);

    const Outcome st = invoke({"check", "stefan", "--form", "inverse-sqrt", "--out", dir.string()});
    REQUIRE(st.code == ok);
    CHECK(st.out.find("row 3") != std::string::npos);
    CHECK(invoke({"check", "table2-case-8", "--out", dir.string()}).code == ok);
}

TEST_CASE("output directory falls back to STEFANLIE_OUT") {
    const fs::path dir = scratch("env");
    ::setenv("STEFANLIE_OUT", dir.string().c_str(), 1);
    const Outcome o = invoke({"check", "rod", "--k=1", "--q0=0"});
    ::unsetenv("STEFANLIE_OUT");
    REQUIRE(o.code == ok);
    CHECK(fs::exists(dir / "check_report.txt"));
}

TEST_CASE("solver failure exits 1") {
    const fs::path dir = scratch("fail");
    // a tolerance below roundoff cannot be met
    const Outcome o = invoke({"solve-ss", "--tolerance", "1e-300", "--out", dir.string()});
    CHECK(o.code == not_converged);
    CHECK(o.err.find("no convergence") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "ss_summary.csv"));
}
