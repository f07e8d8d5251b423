#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wander/cli/run.hpp"
#include "wander/cli/scenario.hpp"

namespace wander::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kScenarioDir = WANDER_SCENARIO_DIR;

std::vector<fs::path> scenario_files() {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(kScenarioDir))
    if (entry.path().extension() == ".json") out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

Scenario load(const std::string& name) { return ingest(kScenarioDir / (name + ".json")); }

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

json without_timestamp(json doc) {
  doc["provenance"].erase("timestamp");
  return doc;
}

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("wander_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_binary(const std::string& args) {
  const std::string command = std::string(WANDER_LAB_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Scenario, BundledScenariosRoundTrip) {
  const auto files = scenario_files();
  ASSERT_GE(files.size(), 10u);
  for (const auto& path : files) {
    const auto scenario = ingest(path);
    EXPECT_EQ(parse_scenario(serialize(scenario).dump()), scenario) << path;
    EXPECT_EQ(scenario_hash(parse_scenario(serialize(scenario).dump(2))), scenario_hash(scenario)) << path;
  }
}

TEST(Scenario, HashesDistinguishScenarios) {
  std::vector<std::string> hashes;
  for (const auto& path : scenario_files()) hashes.push_back(scenario_hash(ingest(path)));
  std::sort(hashes.begin(), hashes.end());
  EXPECT_EQ(std::adjacent_find(hashes.begin(), hashes.end()), hashes.end());
  for (const auto& h : hashes) EXPECT_EQ(h.size(), 16u);
}

TEST(Scenario, ConstantMapIsOneMapPeriodicRule) {
  const auto s = parse_scenario(R"({"schema_version": 1, "name": "c",
    "inner_sequence": {"rule": "constant", "map": {"zeros": [[0, 0], [-0.5, 0]]}}})");
  ASSERT_TRUE(s.inner_sequence);
  EXPECT_EQ(s.inner_sequence->rule, SequenceRuleSpec::Periodic);
  EXPECT_EQ(s.inner_sequence->period.size(), 1u);
  const auto seq = s.inner_sequence->build();
  EXPECT_NEAR(seq.term(5).lambda(), 0.5, 1e-15);
}

TEST(Scenario, TowerPayload) {
  const auto s = parse_scenario(R"({"schema_version": 1, "name": "t",
    "covering_tower": {"kind": "annulus", "mu0": 0.3, "degrees": {"kind": "constant", "params": [2]}}})");
  ASSERT_TRUE(s.covering_tower);
  const auto tower = s.covering_tower->build();
  EXPECT_EQ(tower.kind(), TowerKind::Annulus);
  EXPECT_EQ(tower.mu0(), 0.3);
  EXPECT_EQ(tower.degree(7), 2u);
}

TEST(Scenario, SyntaxErrorsReportLines) {
  const auto message = error_of("{\n  \"schema_version\": 1,\n  \"name\": \"x\",\n  oops\n}\n");
  EXPECT_NE(message.find("line 4"), std::string::npos) << message;
}

TEST(Scenario, ValidationErrorsNameTheField) {
  EXPECT_NE(error_of(R"({"schema_version": 2, "name": "x", "component_list": []})").find("unsupported version 2"),
            std::string::npos);
  const auto zero = error_of(R"({"schema_version": 1, "name": "x",
    "inner_sequence": {"rule": "constant", "map": {"zeros": [[0, 0], [1.2, 0]]}}})");
  EXPECT_NE(zero.find("inner_sequence.map"), std::string::npos) << zero;
  EXPECT_NE(zero.find("zero 1"), std::string::npos) << zero;
  const auto unknown = error_of(R"({"schema_version": 1, "name": "x", "component_list": [], "extra": 1})");
  EXPECT_NE(unknown.find("extra"), std::string::npos) << unknown;
  EXPECT_FALSE(error_of(R"({"schema_version": 1, "name": "x"})").empty());
  EXPECT_FALSE(error_of(R"({"schema_version": 1, "name": "x", "component_list": [],
    "covering_tower": {"kind": "punctured_disc", "degrees": {"kind": "constant", "params": [2]}}})")
                   .empty());
  const auto degree = error_of(R"({"schema_version": 1, "name": "x",
    "covering_tower": {"kind": "annulus", "mu0": 0.3, "degrees": {"kind": "periodic", "params": [2, 0]}}})");
  EXPECT_NE(degree.find("covering_tower.degrees"), std::string::npos) << degree;
  const auto relation = error_of(R"({"schema_version": 1, "name": "x",
    "component_list": [{"kind": "simply_connected", "relation": "indiscrete"}]})");
  EXPECT_NE(relation.find("component_list[0]"), std::string::npos) << relation;
}

TEST(Scenario, MissingFile) { EXPECT_THROW(ingest(kScenarioDir / "does_not_exist.json"), ScenarioError); }

TEST(Config, Overrides) {
  Options options;
  apply_config(options, json::parse(R"({"tolerance": 1e-6, "max_m": 128, "horizon": 500,
    "grid.radius": 0.2, "grid.count": 16, "seed": 7})"));
  EXPECT_EQ(options.tolerance, 1e-6);
  EXPECT_EQ(options.max_m, 128u);
  EXPECT_EQ(options.horizon, 500u);
  EXPECT_EQ(options.grid.radius, 0.2);
  EXPECT_EQ(options.grid.count, 16u);
  EXPECT_EQ(options.seed, 7u);

  apply_config(options, json::parse(R"({"grid": {"radius": 0.05}})"));
  EXPECT_EQ(options.grid.radius, 0.05);
  EXPECT_EQ(options.grid.count, 16u);
}

TEST(Config, RejectsBadKeysAtomically) {
  Options options;
  const Options before = options;
  EXPECT_THROW(apply_config(options, json::parse(R"({"tolerance": 1e-6, "bogus": 1})")), ScenarioError);
  EXPECT_EQ(options, before);
  EXPECT_THROW(apply_config(options, json::parse(R"({"tolerance": "small"})")), ScenarioError);
  EXPECT_THROW(apply_config(options, json::parse("[1, 2]")), ScenarioError);
}

TEST(Config, RoundTripsThroughJson) {
  Options options;
  options.seed = 99;
  options.grid.radius = 0.3;
  Options copy;
  apply_config(copy, options_to_json(options));
  EXPECT_EQ(copy, options);
}

TEST(SpiralGrid, CoversTheDisc) {
  const auto grid = spiral_grid(0.25, 200);
  ASSERT_EQ(grid.size(), 200u);
  for (cplx z : grid) EXPECT_LT(std::abs(z), 0.25);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) EXPECT_GT(std::abs(grid[i] - grid[j]), 1e-4);
  double outer = 0.0;
  for (cplx z : grid) outer = std::max(outer, std::abs(z));
  EXPECT_GT(outer, 0.24);
}

TEST(Run, ClassifyContracting) {
  const auto report = run("classify", load("classify_linear_045"));
  EXPECT_EQ(report.results["verdict"], "Contracting");
  EXPECT_EQ(report.exit_code, kExitOk);
}

TEST(Run, TeichDimFiniteOne) {
  const auto report = run("teich-dim", load("c09_finite_one"));
  EXPECT_EQ(report.results["dimension"], "Finite(1)");
  EXPECT_EQ(report.exit_code, kExitOk);
  EXPECT_EQ(run("teich-dim", load("c09_empty")).results["dimension"], "Finite(0)");
  EXPECT_EQ(run("teich-dim", load("c09_mixed")).results["dimension"], "Infinite");
  EXPECT_EQ(run("teich-dim", load("c09_discrete_component")).results["dimension"], "Infinite");
}

TEST(Run, TruncatedLinearisationIsNonConvergent) {
  const auto report = run("linearize", load("linearize_truncated"));
  EXPECT_EQ(report.results["status"], "NonConvergent");
  EXPECT_EQ(report.exit_code, kExitUndetermined);
}

TEST(Run, UndeterminedClassification) {
  const auto report = run("classify", load("c05_quantitative_bounds"));
  EXPECT_EQ(report.results["verdict"], "Undetermined");
  EXPECT_EQ(report.exit_code, kExitUndetermined);
}

TEST(Run, TowerCommands) {
  const auto tower = run("tower-verify", load("c07_tower_doubling"));
  EXPECT_EQ(tower.exit_code, kExitOk);
  const auto orbit = run("orbit", load("c07_tower_doubling"));
  EXPECT_EQ(orbit.exit_code, kExitOk);
  const auto inj = run("inj-decay", load("c07_tower_doubling"));
  EXPECT_EQ(inj.exit_code, kExitOk);
  ASSERT_EQ(inj.tables.size(), 1u);
  EXPECT_EQ(inj.tables[0].rows.size(), 16u);
}

TEST(Run, ErrorsCarryScenarioContext) {
  try {
    run("tower-verify", load("c01_koenigs_constant"));
    FAIL() << "expected an error";
  } catch (const std::exception& e) {
    const std::string message = e.what();
    EXPECT_NE(message.find("c01_koenigs_constant"), std::string::npos) << message;
    EXPECT_NE(message.find("tower-verify"), std::string::npos) << message;
  }
  EXPECT_THROW(run("bogus", load("c01_koenigs_constant")), std::exception);
}

TEST(Run, DeterministicModuloTimestamp) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"all", "c01_koenigs_constant"}, {"all", "c07_tower_doubling"}, {"all", "c10_grand_orbit_koenigs"},
      {"all", "c09_finite_one"},       {"linearize", "c02_semi_contracting_family"}};
  for (const auto& [command, name] : cases) {
    const auto scenario = load(name);
    const auto a = run(command, scenario);
    const auto b = run(command, scenario);
    EXPECT_EQ(without_timestamp(a.document()).dump(), without_timestamp(b.document()).dump()) << name;
    ASSERT_EQ(a.tables.size(), b.tables.size());
    for (std::size_t i = 0; i < a.tables.size(); ++i) EXPECT_EQ(a.tables[i].render(), b.tables[i].render());
  }
}

TEST(Run, DocumentCarriesProvenance) {
  const auto scenario = load("c01_koenigs_constant");
  const auto doc = run("classify", scenario).document();
  EXPECT_EQ(doc["scenario"]["name"], "c01_koenigs_constant");
  EXPECT_EQ(doc["scenario"]["hash"], scenario_hash(scenario));
  EXPECT_EQ(doc["provenance"]["tool_version"], kToolVersion);
  EXPECT_EQ(doc["provenance"]["config"], options_to_json(scenario.options));
  EXPECT_TRUE(doc["provenance"]["timestamp"].contains("wall_time_seconds"));
}

TEST(PlotTable, Render) {
  const PlotTable t{"x.tsv", {"re", "im"}, {{"1", "2"}, {"3", "4"}}};
  EXPECT_EQ(t.render(), "re\tim\n1\t2\n3\t4\n");
}

TEST(Outputs, WritesReportAndTables) {
  const auto dir = temp_dir("outputs");
  const auto report = run("linearize", load("c01_koenigs_constant"));
  write_outputs(report, dir);
  EXPECT_TRUE(fs::exists(dir / "linearize.report.json"));
  std::ifstream table(dir / "linearize.tsv");
  std::string header;
  std::getline(table, header);
  EXPECT_EQ(header.substr(0, 6), "re\tim\t");
  std::size_t rows = 0;
  for (std::string line; std::getline(table, line);) ++rows;
  EXPECT_EQ(rows, load("c01_koenigs_constant").options.grid.count);
  std::ifstream doc(dir / "linearize.report.json");
  EXPECT_EQ(without_timestamp(json::parse(doc)), without_timestamp(report.document()));
}

TEST(Binary, ExitCodes) {
  const auto dir = temp_dir("binary");
  const auto scenario = [](const std::string& name) { return (kScenarioDir / (name + ".json")).string(); };
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(run_binary("classify --scenario " + scenario("classify_linear_045") + out), 0);
  EXPECT_EQ(run_binary("teich-dim --scenario " + scenario("c09_finite_one") + out), 0);
  EXPECT_EQ(run_binary("linearize --scenario " + scenario("linearize_truncated") + out), 2);
  EXPECT_EQ(run_binary("classify --scenario " + (dir / "missing.json").string() + out), 1);
  EXPECT_EQ(run_binary("bogus --scenario " + scenario("c01_koenigs_constant") + out), 1);
  EXPECT_EQ(run_binary("tower-verify --scenario " + scenario("c01_koenigs_constant") + out), 1);
}

TEST(Binary, ConfigFileOverridesScenario) {
  const auto dir = temp_dir("config");
  {
    std::ofstream config(dir / "config.json");
    config << R"({"max_m": 1 })";
  }
  const auto scenario = (kScenarioDir / "c01_koenigs_constant.json").string();
  EXPECT_EQ(run_binary("linearize --scenario " + scenario + " --config " + (dir / "config.json").string() +
                       " --out " + dir.string()),
            2);
  std::ifstream doc(dir / "linearize.report.json");
  const auto report = json::parse(doc);
  EXPECT_EQ(report["provenance"]["config"]["max_m"], 1);
  EXPECT_EQ(report["results"]["status"], "NonConvergent");
}

}  // namespace
}  // namespace wander::cli
