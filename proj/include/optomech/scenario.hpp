// Scenario runner: turns a validated RunConfig into result tables, one row
// per sweep point (or several for per-mode scenarios), and writes them as CSV
// with a meta.json sidecar.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "optomech/config.hpp"
#include "optomech/core.hpp"

namespace optomech::scenario {

struct ResultTable {
  std::string name;                  // file stem
  std::vector<std::string> columns;  // "name[unit]"
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  /// Header plus rows, %.10g, '\n' line ends. Same table gives the same bytes.
  std::string to_csv() const;
};

struct RunResult {
  std::vector<ResultTable> tables;  // tables[0] is the main result
  std::vector<std::string> warnings;
  nlohmann::json meta;              // config echo, version, wall time
};

/// Runs the configured scenario. Solver failures are rethrown with the
/// scenario and sweep point prepended, keeping their error class.
RunResult run_scenario(const config::RunConfig& cfg);

/// Writes every table as <name>.csv and meta.json into dir, creating it.
void write_outputs(const RunResult& result, const std::filesystem::path& dir);

/// Sweep values in order, or a single NaN when no sweep is configured.
std::vector<double> sweep_values(const config::RunConfig& cfg);

const char* version();

}  // namespace optomech::scenario
