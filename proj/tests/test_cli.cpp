#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "chainwalk/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / ("chainwalk_cli_" + std::to_string(getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

CliResult run_cli(const std::string &args) {
    const fs::path out_path = work_dir() / "stdout.txt";
    const fs::path err_path = work_dir() / "stderr.txt";
    const std::string cmd = std::string(CHAINWALK_BIN) + " " + args + " > " + out_path.string() +
                            " 2> " + err_path.string();
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = chainwalk::read_text_file(out_path.string());
    r.err = chainwalk::read_text_file(err_path.string());
    return r;
}

double csv_value(const std::string &csv, const std::string &row_prefix) {
    const auto pos = csv.find("\n" + row_prefix);
    REQUIRE(pos != std::string::npos);
    return std::strtod(csv.c_str() + pos + 1 + row_prefix.size(), nullptr);
}

}  // namespace

TEST_CASE("walk: the d=8 single Hadamard step lands on nodes 3 and 6") {
    const CliResult r =
        run_cli("walk --nodes 8 --steps 1 --coin hadamard --backend scalar --start 4 --format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(csv_value(r.out, "1,3,") == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(csv_value(r.out, "1,6,") == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(csv_value(r.out, "1,4,") == doctest::Approx(0.0));
    CHECK(r.out.rfind("step,node,probability\n", 0) == 0);
}

TEST_CASE("walk: zero steps is a point mass at the start") {
    const CliResult r = run_cli("walk --nodes 8 --steps 0 --start 2 --format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(csv_value(r.out, "0,2,") == 1.0);
}

TEST_CASE("walk: odd node counts are a usage error") {
    const CliResult r = run_cli("walk --nodes 9 --steps 1");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("even") != std::string::npos);
}

TEST_CASE("walk: shots without a seed are rejected") {
    const CliResult r = run_cli("walk --nodes 8 --steps 1 --shots 100");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("seed") != std::string::npos);
}

TEST_CASE("walk: statevector backend cap") {
    const CliResult r = run_cli("walk --nodes 16 --steps 1 --backend statevector");
    CHECK(r.exit_code == 2);
}

TEST_CASE("walk outputs are byte-identical across reruns") {
    const std::string args =
        "walk --nodes 8 --steps 5 --backend subspace --shots 1000 --seed 42 --format json";
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"schemaVersion\": 1") != std::string::npos);
    CHECK(a.out.find("\"histogram\"") != std::string::npos);
}

TEST_CASE("walk: backends agree through the CLI under matched conventions") {
    // the circuit backends carry the det-corrected swap, so the scalar leg
    // must run with --swap-phase i once the support can touch a boundary
    const CliResult scalar =
        run_cli("walk --nodes 8 --steps 4 --backend scalar --swap-phase i --format csv");
    const CliResult statevector =
        run_cli("walk --nodes 8 --steps 4 --backend statevector --format csv");
    REQUIRE(scalar.exit_code == 0);
    REQUIRE(statevector.exit_code == 0);

    // identical rows up to the last digit of the probabilities
    std::istringstream sa(scalar.out), sb(statevector.out);
    std::string la, lb;
    while (std::getline(sa, la) && std::getline(sb, lb)) {
        if (la.rfind("step", 0) == 0) continue;
        const auto cut = la.rfind(',');
        REQUIRE(lb.rfind(',') == cut);
        CHECK(la.substr(0, cut) == lb.substr(0, cut));
        const double pa = std::strtod(la.substr(cut + 1).c_str(), nullptr);
        const double pb = std::strtod(lb.substr(cut + 1).c_str(), nullptr);
        CHECK(std::abs(pa - pb) <= 1e-12);
    }
}

TEST_CASE("walk: periodic boundary runs the coined engine") {
    // identity coin on a ring: |c=0,k=0> = node 0 -> node 2 (= |0>|1>)
    const CliResult r = run_cli(
        "walk --nodes 8 --steps 1 --coin identity --boundary periodic --start 0 --format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(csv_value(r.out, "1,2,") == 1.0);

    const CliResult bad = run_cli("walk --nodes 8 --boundary periodic --backend subspace");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("emit-qasm matches the frozen fixture through the CLI") {
    const CliResult r = run_cli("emit-qasm --nodes 4 --steps 1 --coin hadamard --measure");
    REQUIRE(r.exit_code == 0);
    const std::string golden =
        chainwalk::read_text_file(std::string(CHAINWALK_FIXTURES) + "/walk_d4_hadamard_1step.qasm");
    CHECK(r.out == golden);
}

TEST_CASE("emit-qasm without --measure has no classical register") {
    const CliResult r = run_cli("emit-qasm --nodes 4 --steps 1");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("creg") == std::string::npos);
    CHECK(r.out.find("\nmeasure ") == std::string::npos);
}

TEST_CASE("validate: clean run exits 0, injected fault exits 1") {
    const CliResult ok = run_cli("validate --nodes 8 --steps 5 --tolerance 1e-10");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("\"pass\": true") != std::string::npos);

    const CliResult bad = run_cli("validate --nodes 8 --steps 5 --inject-fault");
    CHECK(bad.exit_code == 1);
    CHECK(bad.out.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("validate: large d skips the statevector leg and still passes") {
    const CliResult r = run_cli("validate --nodes 4096 --steps 3 --tolerance 1e-9");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"skipped\": true") != std::string::npos);
}

TEST_CASE("config file provides defaults and flags override it") {
    const fs::path cfg = work_dir() / "run.json";
    chainwalk::write_text_file(cfg.string(),
                               R"({"nodes": 8, "steps": 1, "coin": "hadamard", "start": 4,)"
                               R"( "format": "csv", "backend": "scalar"})");
    const CliResult from_cfg = run_cli("walk --config " + cfg.string());
    REQUIRE(from_cfg.exit_code == 0);
    CHECK(from_cfg.out.find("1,3,0.5\n") != std::string::npos);

    // flag wins over the config value
    const CliResult overridden = run_cli("walk --config " + cfg.string() + " --steps 0");
    REQUIRE(overridden.exit_code == 0);
    CHECK(overridden.out.find("0,4,1\n") != std::string::npos);
    CHECK(overridden.out.find("1,3,") == std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("walk --nodes 8 --backend warp").exit_code == 2);
    CHECK(run_cli("walk").exit_code == 2);  // nodes missing (defaults to 0)
}

TEST_CASE("bench: zero steps are flagged unreliable") {
    const CliResult r =
        run_cli("bench --bench-min 64 --bench-max 256 --steps 0 --statevector-contrast 0");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("unreliable") != std::string::npos);
}
