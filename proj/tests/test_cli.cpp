#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

// binary path injected by CMake
#ifndef PERC_BIN
#define PERC_BIN "./perc"
#endif

namespace {

int run_cmd(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + std::string(PERC_BIN) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

int count_columns(const std::string& line) {
    int c = 1;
    for (char ch : line) c += ch == ',';
    return c;
}

} // namespace

TEST_CASE("kappa writes the pinned CSV schema") {
    REQUIRE(run_cmd("kappa --lattice square-bond --n 6 --p 0.45 --samples 2000 --seed 7 "
                    "--out /tmp/perc_test_kappa") == 0);
    auto lines = split_lines(slurp("/tmp/perc_test_kappa.csv"));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "observable,lattice,n,p,value,stderr,samples,seed");
    CHECK(count_columns(lines[1]) == 8);
    CHECK(lines[1].substr(0, 18) == "kappa,square-bond,");
    // manifest alongside
    std::string manifest = slurp("/tmp/perc_test_kappa.manifest.json");
    CHECK(manifest.find("\"command\"") != std::string::npos);
    CHECK(manifest.find("\"master_seed\"") != std::string::npos);
}

TEST_CASE("sweep output is identical for 1 and 8 workers") {
    REQUIRE(run_cmd("sweep --lattice tri-site --n-list 4,6 --p-list 0.3,0.5 --samples 500 "
                    "--seed 5 --out /tmp/perc_test_w1",
                    "PERC_THREADS=1") == 0);
    REQUIRE(run_cmd("sweep --lattice tri-site --n-list 4,6 --p-list 0.3,0.5 --samples 500 "
                    "--seed 5 --out /tmp/perc_test_w8",
                    "PERC_THREADS=8") == 0);
    std::string a = slurp("/tmp/perc_test_w1.csv");
    std::string b = slurp("/tmp/perc_test_w8.csv");
    REQUIRE(!a.empty());
    CHECK(a == b);
    auto lines = split_lines(a);
    CHECK(lines[0] == "observable,lattice,n,p,value,stderr,samples,seed,incomplete");
    CHECK(lines.size() == 5);
}

TEST_CASE("manifest rerun reproduces outputs byte for byte") {
    REQUIRE(run_cmd("sweep --lattice square-bond --n-list 5 --p-list 0.4,0.6 --samples 400 "
                    "--seed 12 --out /tmp/perc_test_m1") == 0);
    REQUIRE(run_cmd("rerun /tmp/perc_test_m1.manifest.json --out /tmp/perc_test_m2") == 0);
    CHECK(slurp("/tmp/perc_test_m1.csv") == slurp("/tmp/perc_test_m2.csv"));
}

TEST_CASE("exit codes: usage 2, guard 3") {
    CHECK(run_cmd("definitely-not-a-subcommand") == 2);
    CHECK(run_cmd("kappa --definitely-not-a-flag 3") == 2);
    CHECK(run_cmd("enumerate --lattice square-bond --n 3") == 3); // 84 bonds > guard
    CHECK(run_cmd("--help") == 0);
}

TEST_CASE("arms | fit pipe produces a fit") {
    std::string cmd = std::string(PERC_BIN) +
                      " arms --lattice tri-site --colors OV --m 1 --n-list 4,8,16 --p 0.5 "
                      "--samples 2000 --seed 3 | " +
                      std::string(PERC_BIN) + " fit --x n > /tmp/perc_test_pipe.json 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    std::string j = slurp("/tmp/perc_test_pipe.json");
    CHECK(j.find("\"exponent\"") != std::string::npos);
    CHECK(j.find("\"points_used\": 3") != std::string::npos);
}

TEST_CASE("enumerate emits exact rational coefficients") {
    REQUIRE(run_cmd("enumerate --lattice square-bond --n 1 --observable clusters --derive 1 "
                    "--out /tmp/perc_test_enum") == 0);
    std::string j = slurp("/tmp/perc_test_enum.json");
    // constant term 9 (all-vacant cluster count), linear term -12
    CHECK(j.find("\"9\"") != std::string::npos);
    CHECK(j.find("\"-12\"") != std::string::npos);
    CHECK(j.find("derivative_coefficients") != std::string::npos);
}

TEST_CASE("length emits one row per p") {
    REQUIRE(run_cmd("length --lattice tri-site --p-list 0.2,0.3 --epsilon0 0.05 "
                    "--samples-per-step 400 --n-max 64 --seed 9 --out /tmp/perc_test_len") == 0);
    auto lines = split_lines(slurp("/tmp/perc_test_len.csv"));
    REQUIRE(lines.size() == 3);
    CHECK(lines[1].substr(0, 2) == "L,");
}
