#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "arlab/kernel.hpp"
#include "arlab/trig_polynomial.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path(ARLAB_CLI_WORKDIR);

int run(const std::string& args) {
    const std::string cmd = std::string("\"") + ARLAB_CLI + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh(const std::string& name) {
    const fs::path dir = kWork / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("fixed-point below threshold reports the incoherent state") {
    const fs::path out = fresh("fp");
    REQUIRE(run("fixed-point --K 0.5 --out " + out.string()) == 0);
    const auto sd = arlab::StationaryDensity::from_record(slurp(out / "stationary.txt"));
    CHECK(sd.r() == 0.0);
    CHECK(sd.K() == 0.5);
    CHECK(read(out / "manifest.json")["command"] == "fixed-point");
}

TEST_CASE("design then force recovers the target") {
    const fs::path d = fresh("design");
    REQUIRE(run("design --K 2.5 --target \"1; 0.2,0.5; 0.1,-0.3\" --out " + d.string()) == 0);
    const std::string V = read(d / "potential.json")["V"];

    const fs::path f = fresh("force");
    REQUIRE(run("force --K 2.5 --V \"" + V + "\" --out " + f.string()) == 0);
    const auto force = arlab::TrigPolynomial::from_text(read(f / "force.json")["f"].get<std::string>());
    const auto target = arlab::TrigPolynomial::from_text("1; 0.2,0.5; 0.1,-0.3");
    CHECK((force + (-1.0) * target).coefficient_l1() < 1e-10);
    CHECK(read(f / "force.json")["max_route_difference"].get<double>() < 1e-8);
}

TEST_CASE("table1 writes one row per delta") {
    const fs::path out = fresh("table1");
    REQUIRE(run("table1 --deltas 0.32,0.64 --windings 2 --n-modes 32 --out " + out.string()) == 0);
    std::istringstream csv(slurp(out / "table1.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "delta,T_delta,tau_over_delta");
    int rows = 0;
    while (std::getline(csv, line)) {
        double delta = 0.0, T = 0.0, pred = 0.0;
        char c1 = 0, c2 = 0;
        std::istringstream row(line);
        row >> delta >> c1 >> T >> c2 >> pred;
        CHECK(c1 == ',');
        CHECK(T > pred);
        CHECK(T / pred - 1.0 < 0.25);
        ++rows;
    }
    CHECK(rows == 2);
}

TEST_CASE("invalid input exits with status 1") {
    CHECK(run("correction --K 1 --out " + fresh("bad1").string()) == 1);
    CHECK(run("fixed-point --K -1 --out " + fresh("bad2").string()) == 1);
    CHECK(run("force --V \"1; x\" --out " + fresh("bad3").string()) == 1);
    CHECK(run("no-such-command") != 0);

    const fs::path cfg = kWork / "unknown_key.json";
    std::ofstream(cfg) << R"({"K": 2.0, "bogus": 1})";
    CHECK(run("fixed-point --config " + cfg.string() + " --out " + fresh("bad4").string()) == 1);
}

TEST_CASE("a manifest regenerates identical outputs") {
    const struct {
        std::string command;
        std::string args;
    } cases[] = {
        {"classify", "--f \"0.2; 0,1; 0.3,0\""},
        {"scan", "--nK 8 --na 8 --K-max 3"},
        {"pde-period", "--delta 0.64 --windings 1 --n-modes 24"},
    };
    for (const auto& c : cases) {
        const fs::path first = fresh(c.command + "_a"), second = fresh(c.command + "_b");
        REQUIRE(run(c.command + " " + c.args + " --out " + first.string()) == 0);
        REQUIRE(run(c.command + " --config " + (first / "manifest.json").string() + " --out " + second.string()) == 0);
        const auto manifest = read(first / "manifest.json");
        CHECK(manifest == read(second / "manifest.json"));
        for (const auto& name : manifest["outputs"]) {
            const std::string file = name.get<std::string>();
            CHECK_MESSAGE(slurp(first / file) == slurp(second / file), file);
        }
    }
    CHECK(run("scan --config " + (kWork / "classify_a" / "manifest.json").string() + " --out " +
              fresh("mismatch").string()) == 1);
}
