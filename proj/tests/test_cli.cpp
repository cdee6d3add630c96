#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "looprate/cli.hpp"

using namespace looprate;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    fs::path dir = fs::temp_directory_path() / "looprate_cli_tests";
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream out(p);
    out << content;
    return p;
}

const char* k3_json = R"({
  "vertices": [1, 2, 3],
  "edges": [[1, 2, 1], [2, 3, 1], [3, 1, 1]],
  "sink": 3,
  "rotation": {"1": [2, 0], "2": [0, 1], "3": [1, 2]}
})";

const char* c4_json = R"({
  "vertices": [0, 1, 2, 3],
  "edges": [[0, 1, 1], [1, 2, 1], [2, 3, 1], [3, 0, 1]],
  "rotation": {"0": [3, 0], "1": [0, 1], "2": [1, 2], "3": [2, 3]}
})";

const char* bridge_json = R"({
  "vertices": [0, 1],
  "edges": [[0, 1, 1]],
  "rotation": {"0": [0], "1": [0]}
})";

}  // namespace

TEST_CASE("exact on K3") {
    fs::path p = write_temp("k3.json", k3_json);
    CliResult res = run_cli({"exact", p.string()});
    REQUIRE(res.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(res.out);
    CHECK(j.at("tau") == "1/9");
    CHECK(j.at("rho") == "4/9");
    CHECK(j.at("lambda") == "3");
    CHECK(j.at("delta_rho") == "8/9");
    CHECK(j.at("sand_density") == "4/9");
    CHECK(j.at("f1") == "3");
    CHECK(j.at("f2") == "3");
    CHECK(j.at("unicycles") == "1");
    CHECK(j.at("edge_in_tree") == "2/3");
}

TEST_CASE("exact on C4 and csv output") {
    fs::path p = write_temp("c4.json", c4_json);
    CliResult res = run_cli({"exact", p.string()});
    REQUIRE(res.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(res.out);
    CHECK(j.at("tau") == "1/16");
    CHECK(j.at("rho") == "7/16");
    CHECK(j.at("sand_density").is_null());

    CliResult csv = run_cli({"exact", p.string(), "--format", "csv"});
    CHECK(csv.exit_code == 0);
    CHECK(csv.out.find("tau,lambda,") == 0);
    CHECK(csv.out.find("1/16,4,16/7,7/16") != std::string::npos);
}

TEST_CASE("exact with the float backend renders numbers") {
    fs::path p = write_temp("k3.json", k3_json);
    CliResult res = run_cli({"exact", p.string(), "--backend", "float"});
    REQUIRE(res.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(res.out);
    CHECK(j.at("tau").is_number());
    CHECK(j.at("tau").get<double>() == doctest::Approx(1.0 / 9).epsilon(1e-9));
    CHECK(j.at("f1").get<double>() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(j.at("unicycles").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("exact errors are machine readable") {
    fs::path p = write_temp("bridge.json", bridge_json);
    CliResult res = run_cli({"exact", p.string()});
    CHECK(res.exit_code == 1);
    nlohmann::json j = nlohmann::json::parse(res.out);
    CHECK(j.at("error").at("code") == "BridgePresent");

    CliResult missing = run_cli({"exact", "/nonexistent/file.json"});
    CHECK(missing.exit_code == 1);
    CHECK(nlohmann::json::parse(missing.out).at("error").at("code") == "BadInput");
}

TEST_CASE("table command") {
    CliResult res = run_cli({"table", "square", "--format", "csv"});
    REQUIRE(res.exit_code == 0);
    CHECK(res.out.find("square,1/16,8,16/5,5/16,5/4,17/8") != std::string::npos);

    CliResult all = run_cli({"table", "all", "--format", "csv"});
    int lines = 0;
    for (char c : all.out)
        if (c == '\n') ++lines;
    CHECK(lines == 10);  // header + nine lattices

    CliResult bad = run_cli({"table", "pentagonal"});
    CHECK(bad.exit_code == 1);
    CHECK(nlohmann::json::parse(bad.out).at("error").at("code") == "UnknownLattice");
}

TEST_CASE("sample command is seed deterministic") {
    fs::path p = write_temp("k3s.json", k3_json);
    CliResult a = run_cli({"sample", p.string(), "--steps", "20000", "--seed", "5"});
    CliResult b = run_cli({"sample", p.string(), "--steps", "20000", "--seed", "5"});
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    nlohmann::json j = nlohmann::json::parse(a.out);
    CHECK(j.at("rho").at("exact") == "4/9");
    double est = j.at("rho").at("estimate").get<double>();
    CHECK(est > 0.3);
    CHECK(est < 0.6);
    CHECK(j.at("edge_in_tree").size() == 3);

    CliResult too_few = run_cli({"sample", p.string(), "--steps", "10"});
    CHECK(too_few.exit_code == 1);
}

TEST_CASE("LOOPRATE_SEED environment variable, flag wins") {
    fs::path p = write_temp("k3e.json", k3_json);
    setenv("LOOPRATE_SEED", "77", 1);
    CliResult env_run = run_cli({"sample", p.string(), "--steps", "20000"});
    nlohmann::json je = nlohmann::json::parse(env_run.out);
    CHECK(je.at("seed").get<uint64_t>() == 77);
    CliResult flag_run = run_cli({"sample", p.string(), "--steps", "20000", "--seed", "5"});
    CHECK(nlohmann::json::parse(flag_run.out).at("seed").get<uint64_t>() == 5);
    unsetenv("LOOPRATE_SEED");
}

TEST_CASE("sandpile command") {
    fs::path g = write_temp("house.json", k3_json);
    fs::path s = write_temp("pile.json", std::string(R"({"graph": "house.json", "heights": {"1": 5, "2": 0}})"));
    CliResult res = run_cli({"sandpile", s.string()});
    REQUIRE(res.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(res.out);
    // (5,0): h1 = 5 - 2*k1 + k2, h2 = k1 - 2*k2 stable only at k1 = 3, k2 = 1
    CHECK(j.at("heights").at("1").get<long long>() == 0);
    CHECK(j.at("heights").at("2").get<long long>() == 1);
    CHECK(j.at("topples").at("1").get<long long>() == 3);
    CHECK(j.at("topples").at("2").get<long long>() == 1);
}

TEST_CASE("verify command") {
    CliResult res = run_cli({"verify", "--n", "12"});
    REQUIRE(res.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(res.out);
    CHECK(j.at("all_pass").get<bool>());
    CHECK(j.at("results").size() >= 4);

    CliResult too_big = run_cli({"verify", "--n", "30"});
    CHECK(too_big.exit_code == 1);
    CHECK(nlohmann::json::parse(too_big.out).at("error").at("code") == "TooLarge");

    CliResult vacuous = run_cli({"verify", "--n", "2"});
    CHECK(vacuous.exit_code == 0);
    nlohmann::json jv = nlohmann::json::parse(vacuous.out);
    CHECK(jv.contains("warning"));
}

TEST_CASE("lattice-check command") {
    CliResult res = run_cli({"lattice-check", "square", "--n", "8"});
    REQUIRE(res.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(res.out);
    CHECK(j.at("lattice") == "square");
    CHECK(j.at("deviation_decreasing").get<bool>());
    CHECK(j.at("patches").size() == 2);

    fs::path user = write_temp("user_lattice.json", R"({
      "vertices": [{"id": 0, "degree": 4}],
      "edges": [{"from": 0, "to": 0, "offset": [1, 0], "weight": 1},
                {"from": 0, "to": 0, "offset": [0, 1], "weight": 1}]
    })");
    CliResult ures = run_cli({"lattice-check", user.string(), "--n", "4"});
    REQUIRE(ures.exit_code == 0);
    nlohmann::json ju = nlohmann::json::parse(ures.out);
    CHECK_FALSE(ju.contains("deviation_decreasing"));
}

TEST_CASE("graph weights parse as integers, decimals, and p/q strings") {
    fs::path p = write_temp("weights.json", R"({
      "vertices": [0, 1, 2],
      "edges": [[0, 1, "1/2"], [1, 2, "0.25"], [2, 0, 3]],
      "rotation": {"0": [2, 0], "1": [0, 1], "2": [1, 2]}
    })");
    CliResult res = run_cli({"exact", p.string()});
    REQUIRE(res.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(res.out);
    // F1 = w01*w12 + w01*w20 + w12*w20 = 1/8 + 3/2 + 3/4 = 19/8
    CHECK(j.at("f1") == "19/8");
}

TEST_CASE("stabilized sandpile to verify the house example") {
    // (2,2) stabilizes to (1,1) with one topple each
    fs::path g = write_temp("house.json", k3_json);
    fs::path s = write_temp("pile22.json", std::string(R"({"graph": "house.json", "heights": {"1": 2, "2": 2}})"));
    CliResult res = run_cli({"sandpile", s.string()});
    nlohmann::json j = nlohmann::json::parse(res.out);
    CHECK(j.at("heights").at("1").get<long long>() == 1);
    CHECK(j.at("heights").at("2").get<long long>() == 1);
    CHECK(j.at("topples").at("1").get<long long>() == 1);
}
