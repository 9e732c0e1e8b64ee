#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specrad/driver.hpp"

#include <fstream>

using specrad::cli::RunResult;
using specrad::cli::run;

namespace {

std::string artifact(const RunResult& r, const std::string& name) {
    for (const auto& [n, content] : r.artifacts) {
        if (n == name) return content;
    }
    return {};
}

}  // namespace

TEST_CASE("walks count subcommand") {
    auto r = run({"walks", "count", "--rank", "1", "--n", "4"});
    CHECK(r.exit_code == 0);
    CHECK(r.table == "6\n");
    CHECK(r.summary_json.find("\"count\": \"6\"") != std::string::npos);
}

TEST_CASE("rho return emits the nondecreasing series") {
    auto r = run({"rho", "return", "--rank", "2", "--n", "8"});
    CHECK(r.exit_code == 0);
    auto csv = artifact(r, "rho_return.csv");
    CHECK(csv.find("walk_length,value,kind,parameter,error_slack") == 0);
    CHECK(csv.find("certified-lower") != std::string::npos);
    // first bound: (4/16)^(1/2) = 0.5
    CHECK(csv.find("2,0.5,") != std::string::npos);
}

TEST_CASE("measure mu CSV has exact rationals") {
    auto r = run({"measure", "mu", "--rank", "2", "--n", "2"});
    CHECK(r.exit_code == 0);
    auto csv = artifact(r, "mu.csv");
    CHECK(csv.find("element,numerator,denominator,float") == 0);
    CHECK(csv.find("e,1,2,0.5") != std::string::npos);
    CHECK(csv.find("a,1,8,0.125") != std::string::npos);
}

TEST_CASE("ineq finite-n reports certified nonnegative margin") {
    auto r = run({"ineq", "finite-n", "--rank", "3", "--subgroup", "a,b", "--n", "6"});
    CHECK(r.exit_code == 0);
    CHECK(r.table.find("certified true") != std::string::npos);
    CHECK(r.summary_json.find("\"margin\"") != std::string::npos);
}

TEST_CASE("qinv exits zero on nonnegative margins") {
    auto r = run({"qinv", "--rank", "1", "--n", "1", "--set", "e", "--letter", "a"});
    CHECK(r.exit_code == 0);
    CHECK(r.summary_json.find("\"nu_A\": \"5/12\"") != std::string::npos);
}

TEST_CASE("graph file subcommands") {
    const char* path = "test_driver_petersen.graph";
    {
        std::ofstream out(path);
        out << "vertices 10 degree 3\n";
        const int outer[5][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}};
        const int inner[5][2] = {{5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5}};
        for (auto& e : outer) out << e[0] << " " << e[1] << " 1\n";
        for (auto& e : inner) out << e[0] << " " << e[1] << " 1\n";
        for (int i = 0; i < 5; ++i) out << i << " " << i + 5 << " 1\n";
    }
    SUBCASE("rho finite") {
        auto r = run({"rho", "finite", "--graph", path});
        CHECK(r.exit_code == 0);
        CHECK(r.table.find("ramanujan true") != std::string::npos);
    }
    SUBCASE("power") {
        auto r = run({"power", "--graph", path, "--k", "2"});
        CHECK(r.exit_code == 0);
        CHECK(artifact(r, "power.graph").find("vertices 10 degree 6") == 0);
        CHECK(r.summary_json.find("\"agree\": true") != std::string::npos);
    }
    SUBCASE("cycles indicator") {
        auto r = run({"cycles", "indicator", "--graph", path, "--k", "5", "--vertex", "0"});
        CHECK(r.exit_code == 0);
        CHECK(r.table.find("C 1  D 1") != std::string::npos);
    }
}

TEST_CASE("realize round trip") {
    const char* path = "test_driver_k5.graph";
    {
        std::ofstream out(path);
        out << "vertices 5 degree 4\n";
        for (int i = 0; i < 5; ++i) {
            for (int j = i + 1; j < 5; ++j) out << i << " " << j << " 1\n";
        }
    }
    auto r = run({"realize", "--graph", path});
    CHECK(r.exit_code == 0);
    CHECK(r.table.find("verified true") != std::string::npos);
}

TEST_CASE("byte-identical reruns, including seeded monte carlo") {
    std::vector<std::string> args{"cycles", "density-mc", "--rank", "2", "--subgroup", "aa,bb",
                                  "--k", "2", "--n", "24", "--walkers", "2000", "--seed", "42"};
    auto a = run(args);
    auto b = run(args);
    CHECK(a.exit_code == 0);
    REQUIRE(a.artifacts.size() == b.artifacts.size());
    for (std::size_t i = 0; i < a.artifacts.size(); ++i) {
        CHECK(a.artifacts[i].first == b.artifacts[i].first);
        CHECK(a.artifacts[i].second == b.artifacts[i].second);
    }
    CHECK(a.summary_json == b.summary_json);

    auto dp = run({"cycles", "density-dp", "--rank", "2", "--subgroup", "aa,bb", "--k", "2", "--n", "24"});
    auto dp2 = run({"cycles", "density-dp", "--rank", "2", "--subgroup", "aa,bb", "--k", "2", "--n", "24"});
    CHECK(dp.artifacts == dp2.artifacts);
    CHECK(artifact(dp, "density_dp.csv").find("j,q_num,q_den,q_float") == 0);
}

TEST_CASE("group spec files") {
    const char* path = "test_driver_group.spec";
    {
        std::ofstream out(path);
        out << "rank 3\nsubgroup a,b\n";
    }
    auto from_file = run({"walks", "count", "--spec", path, "--n", "2"});
    auto from_flags = run({"walks", "count", "--rank", "3", "--subgroup", "a,b", "--n", "2"});
    CHECK(from_file.exit_code == 0);
    CHECK(from_file.table == from_flags.table);
    CHECK(from_file.table == "18\n");
}

TEST_CASE("errors surface with nonzero exit") {
    auto bad = run({"walks", "count", "--rank", "2"});  // missing --n
    CHECK(bad.exit_code != 0);
    auto bad2 = run({"ineq", "finite-n", "--rank", "2", "--subgroup", "a", "--n", "5"});
    CHECK(bad2.exit_code == 3);
    CHECK(bad2.table.find("error:") == 0);
}
