#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sshkit/cli.hpp"

namespace fs = std::filesystem;
using sshkit::cli::run_cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "sshkit");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string config(const std::string& name) {
    return std::string(SSHKIT_SOURCE_DIR) + "/configs/" + name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "sshkit_test_cli";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("derive matches the frozen golden output") {
    const auto r = cli({"derive", "--config", config("derive_bimorph.cfg")});
    CHECK(r.code == 0);
    CHECK(r.out == slurp(std::string(SSHKIT_SOURCE_DIR) + "/tests/golden/derive_bimorph.txt"));
}

TEST_CASE("analytic prints the rig SSHC gain") {
    const auto r = cli({"analytic", "--config", config("rig_sshc.cfg")});
    CHECK(r.code == 0);
    CHECK(r.out.find("sshc = 1.66\n") != std::string::npos);
}

TEST_CASE("missing required key exits 2 and names it") {
    const auto r = cli({"analytic", "--set", "f=85"});
    CHECK(r.code == 2);
    CHECK(r.err.find("Cp") != std::string::npos);
}

TEST_CASE("bad values and flags exit 2") {
    CHECK(cli({"analytic", "--config", config("rig_sshc.cfg"), "--set", "Rload=-5"}).code == 2);
    CHECK(cli({"analytic", "--config", config("rig_sshc.cfg"), "--set", "nokey=1"}).code == 2);
    CHECK(cli({"simulate", "--config", config("rig_sshc.cfg"), "--set", "dt=1"}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({}).code == 2);
}

TEST_CASE("I/O failures exit 3") {
    CHECK(cli({"derive", "--config", "/nonexistent/file.cfg"}).code == 3);
    CHECK(cli({"budget", "--gross", "1e-6", "--out", "/nonexistent/dir/x.txt"}).code == 3);
}

TEST_CASE("help exits 0") {
    const auto r = cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("Config keys") != std::string::npos);
}

TEST_CASE("budget reports break-even") {
    const auto r = cli({"budget", "--gross", "360e-9"});
    CHECK(r.code == 0);
    CHECK(r.out.find("net = 0\n") != std::string::npos);
}

TEST_CASE("non-convergence is a result, not a failure") {
    const auto r = cli({"simulate", "--config", config("rig_sshi.cfg"), "--set", "Rload=inf",
                        "--set", "Q=inf", "--set", "cycles=5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("converged=false") != std::string::npos);
}

TEST_CASE("simulate writes a waveform CSV") {
    const auto path = scratch("wave.csv");
    const auto r = cli({"simulate", "--config", config("rig_sshc.cfg"), "--set", "cycles=5",
                        "--out", path.string()});
    REQUIRE(r.code == 0);
    const auto csv = slurp(path);
    CHECK(csv.rfind("t,Vp,IL,Vadd,switch\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') > 1000);
}

TEST_CASE("sweep CSV and JSON, grid override") {
    const auto csv = scratch("sweep.csv");
    const auto json = scratch("sweep.json");
    const auto r = cli({"sweep", "--config", config("sweep_rload.cfg"), "--grid", "1e6,1e7",
                        "--set", "sweep.evaluator=ANALYTIC_SSHC", "--out", csv.string(), "--json",
                        json.string()});
    REQUIRE(r.code == 0);
    const auto text = slurp(csv);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    CHECK(text.find("1000000,") != std::string::npos);
    const auto j = nlohmann::json::parse(slurp(json));
    CHECK(j["swept"] == "Rload");
    CHECK(j["rows"].size() == 2);
    CHECK(j["fixed"]["Cp"] == 10e-9);
}

TEST_CASE("every subcommand is byte-identical across runs") {
    const std::vector<std::vector<std::string>> cmds = {
        {"derive", "--config", config("derive_bimorph.cfg")},
        {"analytic", "--config", config("rig_sshi.cfg")},
        {"simulate", "--config", config("rig_sshc.cfg"), "--set", "cycles=6"},
        {"compare", "--config", config("compare_sshi.cfg"), "--grid", "2e6,2e7", "--set", "cycles=40"},
        {"sweep", "--config", config("sweep_rload.cfg"), "--set", "cycles=10"},
        {"budget", "--config", config("budget.cfg")},
    };
    for (const auto& c : cmds) {
        std::vector<std::string> text;
        for (int k = 0; k < 2; ++k) {
            auto args = c;
            const auto out = scratch("det_" + c[0] + std::to_string(k));
            args.push_back("--out");
            args.push_back(out.string());
            const auto r = cli(args);
            REQUIRE(r.code == 0);
            text.push_back(slurp(out) + r.out);
        }
        CHECK_FALSE(text[0].empty());
        CHECK(text[0] == text[1]);
    }
}
