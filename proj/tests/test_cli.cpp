#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "dissuasion/benchmark.hpp"
#include "dissuasion/scenarios.hpp"

using namespace dissuasion;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("dissuade_test_" + name);
}

}  // namespace

TEST_CASE("thresholds command") {
  auto r = run({"thresholds", "--c", "1", "--alpha-g", "0.75", "--alpha-l", "0.25"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "q_i=0.416666666667\nq_ii=0.750000000000\nq_m=0.500000000000\np_star=0.625000000000\n"
        "p_star_star=0.571428571429\np_e=0.550000000000\n");

  r = run({"thresholds", "--alpha-g", "0.5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("p_e=null") != std::string::npos);
  CHECK(r.out.find("p_star_star=null") != std::string::npos);

  r = run({"thresholds", "--c", "-1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("c must be positive") != std::string::npos);

  r = run({"thresholds", "--format", "json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["p_e"].get<double>() == doctest::Approx(0.55));
}

TEST_CASE("argument errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"thresholds", "--c", "abc"}).code == 2);
  CHECK(run({"thresholds", "--alpha-g", "0.2", "--alpha-l", "0.3"}).code == 2);
  CHECK(run({"sweep", "--grid", "0.5:0.2:10"}).code == 2);
  CHECK(run({"sweep", "--grid", "0:1:1"}).code == 2);
  CHECK(run({"sweep", "--grid", "0:1"}).code == 2);
  CHECK(run({"sweep", "--format", "xml"}).code == 2);
  CHECK(run({"simulate", "--q", "0.5"}).code == 2);
  CHECK(run({"simulate", "--regime", "action"}).code == 2);
  CHECK(run({"simulate", "--regime", "action", "--q", "0.5", "--n", "0"}).code == 2);
  CHECK(run({"simulate", "--regime", "sideways", "--q", "0.5"}).code == 2);
  CHECK(run({"simulate", "--regime", "action", "--q", "1.5"}).code == 2);
  CHECK(run({"verify", "--grid-step", "0.5"}).code == 2);
  CHECK(run({"thresholds", "--help"}).code == 0);
}

TEST_CASE("sweep rows") {
  auto r = run({"sweep", "--grid", "0.3:0.8:6"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# {", 0) == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == std::vector<std::string>{"q", "pi", "n", "n_u", "n_a", "n_s", "precvx_a", "precvx_s"});
  CHECK(rows[1] == std::vector<std::string>{"0.3", "0", "0", "0", "0", "0", "", ""});
  CHECK(rows[6] == std::vector<std::string>{"0.8", "1.2", "2", "1.31428571429", "1.26666666667", "1.28888888889",
                                            "2", "1.6"});

  r = run({"sweep", "--grid", "0:1:3"});
  CHECK(csv_rows(r.out).size() == 4);

  r = run({"sweep", "--grid", "0:1:3", "--format", "json"});
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["rows"].size() == 3);
  CHECK(doc["rows"][0]["precvx_a"].is_null());
  CHECK(doc["thresholds"]["p_star"].get<double>() == 0.625);
}

TEST_CASE("sweep output round-trips through the closed forms") {
  const auto r = run({"sweep", "--grid", "0:1:401", "--c", "1.7", "--alpha-g", "0.8", "--alpha-l", "0.3"});
  REQUIRE(r.code == 0);
  const Model m(GameParams{1.7, 0.8, 0.3});
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 402);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const double q = std::stod(row[0]);
    CHECK(std::stod(row[1]) == doctest::Approx(no_info_payoff(q, m)).epsilon(1e-9));
    CHECK(std::stod(row[2]) == doctest::Approx(no_info_cost(q, m)).epsilon(1e-9));
    CHECK(std::stod(row[3]) == doctest::Approx(equilibrium_cost(Regime::Unconditional, q, m)).epsilon(1e-9));
    CHECK(std::stod(row[4]) == doctest::Approx(equilibrium_cost(Regime::ActionBased, q, m)).epsilon(1e-9));
    CHECK(std::stod(row[5]) == doctest::Approx(equilibrium_cost(Regime::SignalBased, q, m)).epsilon(1e-9));
    if (!row[6].empty()) CHECK(std::stod(row[6]) == doctest::Approx(action_precvx_cost(q, m)).epsilon(1e-9));
    if (!row[7].empty()) CHECK(std::stod(row[7]) == doctest::Approx(signal_precvx_cost(q, m)).epsilon(1e-9));
  }
}

TEST_CASE("config file with flag overrides") {
  const auto path = temp_file("config.json");
  std::ofstream(path) << R"({"c": 2.0, "alpha_g": 0.9, "alpha_l": 0.1})";
  auto r = run({"thresholds", "--config", path.string(), "--format", "json"});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["q_m"].get<double>() == doctest::Approx(2.0 / 3).epsilon(1e-11));

  r = run({"thresholds", "--config", path.string(), "--c", "1", "--format", "json"});
  doc = nlohmann::json::parse(r.out);
  CHECK(doc["q_m"].get<double>() == doctest::Approx(0.5));

  std::ofstream(path) << R"({"c": 2.0, "colour": 1})";
  CHECK(run({"thresholds", "--config", path.string()}).code == 2);
  std::ofstream(path) << "not json";
  CHECK(run({"thresholds", "--config", path.string()}).code == 2);
  CHECK(run({"thresholds", "--config", temp_file("missing.json").string()}).code == 2);
  std::filesystem::remove(path);
}

TEST_CASE("output file") {
  const auto path = temp_file("sweep.csv");
  const auto r = run({"sweep", "--grid", "0:1:5", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(csv_rows(text.str()).size() == 6);
  std::filesystem::remove(path);
}

TEST_CASE("simulate command") {
  const std::vector<std::string> args{"simulate", "--regime", "action", "--q", "0.5", "--n", "1000000",
                                      "--seed", "7", "--format", "json"};
  const auto a = run(args);
  REQUIRE(a.code == 0);
  const auto doc = nlohmann::json::parse(a.out);
  CHECK(doc["seed"].get<std::uint64_t>() == 7);
  CHECK(doc["exact"]["sender_cost"].get<double>() == doctest::Approx(0.25));
  const double emp = doc["empirical"]["sender_cost"].get<double>();
  const double se = doc["standard_error"]["sender_cost"].get<double>();
  CHECK(std::abs(emp - 0.25) < 4 * se);
  CHECK(run(args).out == a.out);

  const auto csv = run({"simulate", "--regime", "signal", "--q", "0.8", "--n", "1000"});
  CHECK(csv.code == 0);
  CHECK(csv.out.find("statistic,exact,empirical,standard_error\n") != std::string::npos);
}

TEST_CASE("seed from the environment") {
  setenv("DISSUADE_SEED", "123", 1);
  auto r = run({"simulate", "--regime", "unconditional", "--q", "0.6", "--n", "10", "--format", "json"});
  CHECK(nlohmann::json::parse(r.out)["seed"].get<std::uint64_t>() == 123);
  r = run({"simulate", "--regime", "unconditional", "--q", "0.6", "--n", "10", "--seed", "5", "--format", "json"});
  CHECK(nlohmann::json::parse(r.out)["seed"].get<std::uint64_t>() == 5);
  setenv("DISSUADE_SEED", "abc", 1);
  CHECK(run({"simulate", "--regime", "unconditional", "--q", "0.6", "--n", "10"}).code == 2);
  unsetenv("DISSUADE_SEED");
  r = run({"simulate", "--regime", "unconditional", "--q", "0.6", "--n", "10", "--format", "json"});
  CHECK(nlohmann::json::parse(r.out)["seed"].get<std::uint64_t>() == 42);
}

TEST_CASE("verify command") {
  auto r = run({"verify", "--grid-step", "0.01"});
  CHECK(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["pass"].get<bool>());
  for (const auto& check : doc["checks"]) {
    if (check["name"].get<std::string>().rfind("brute_force.", 0) == 0) {
      CHECK(check["tolerance"].get<double>() == doctest::Approx(0.05));
    }
  }

  r = run({"verify", "--grid-step", "0.01", "--inject-fault"});
  CHECK(r.code == 1);
  CHECK(r.err.find("ordering.") != std::string::npos);
  doc = nlohmann::json::parse(r.out);
  CHECK_FALSE(doc["pass"].get<bool>());
}
