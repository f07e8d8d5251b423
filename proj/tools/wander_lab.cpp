#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wander/cli/run.hpp"

int main(int argc, char** argv) {
  using namespace wander::cli;

  CLI::App app{"wander-lab: linearising coordinates, grand-orbit relations and Teichmuller dimension of wandering domains"};
  std::string command;
  std::string scenario_path;
  std::string config_path;
  std::string out_dir = ".";
  app.add_option("command", command, "classify | linearize | quotient | tower-verify | orbit | inj-decay | teich-dim | all")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("--scenario", scenario_path, "scenario file (JSON)")->required();
  app.add_option("--config", config_path, "configuration overrides (JSON)");
  app.add_option("--out", out_dir, "output directory for the report and plot tables");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    Scenario scenario = ingest(scenario_path);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error(config_path + ": cannot open config file");
      nlohmann::json config;
      try {
        config = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(config_path + ": " + e.what());
      }
      apply_config(scenario.options, config);
    }
    const RunReport report = run(command, scenario);
    write_outputs(report, out_dir);
    std::cout << report.document().dump(2) << '\n';
    return report.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "wander-lab: " << e.what() << '\n';
    return kExitError;
  }
}
