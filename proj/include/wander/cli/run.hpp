#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wander/cli/scenario.hpp"

namespace wander::cli {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUndetermined = 2;

const std::vector<std::string>& commands();

// Tab-delimited table with a header row, one record per sample.
struct PlotTable {
  std::string file_name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render() const;
};

struct RunReport {
  std::string scenario_name;
  std::string scenario_hash;
  std::string command;
  nlohmann::json results;
  nlohmann::json provenance;
  int exit_code = kExitOk;
  std::vector<PlotTable> tables;

  // The report document; provenance.timestamp is the only field that
  // differs between runs of the same scenario and config.
  nlohmann::json document() const;
};

// Dispatches a command to the module operations. Mathematical verdicts that
// stay Undetermined (or NonConvergent limits) give exit code 2; module errors
// propagate as exceptions.
RunReport run(const std::string& command, const Scenario& scenario);

// Writes <command>.report.json and the plot tables into out_dir.
void write_outputs(const RunReport& report, const std::filesystem::path& out_dir);

}  // namespace wander::cli
