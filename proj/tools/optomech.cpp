// optomech <scenario> [--config file] [--set key=value]... [--out dir]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "optomech/optomech.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

int exit_code(om_status s) {
  switch (s) {
    case OM_OK: return kExitOk;
    case OM_ERR_CONFIG:
    case OM_ERR_INVALID_INPUT: return kExitValidation;
    case OM_ERR_NUMERICAL: return kExitSolver;
    default: return 1;
  }
}

void report(om_status s) {
  std::string msg = om_last_error();
  std::cerr << "optomech: " << om_status_name(s) << "\n";
  std::istringstream lines(msg);
  for (std::string line; std::getline(lines, line);) std::cerr << "  " << line << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optically trapped membrane solvers"};
  app.footer(om_config_help());
  app.set_version_flag("--version", om_version());

  std::string scenario;
  std::string config_path;
  std::string out_dir;
  std::string figure;
  std::vector<std::string> sets;
  bool quiet = false;
  app.add_option("scenario", scenario,
                 "modes-disk, thermo, tether, spring, coupling, cavity, budget or figure");
  app.add_option("--config,-c", config_path, "YAML or JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--set,-s", sets, "override a key, key=value; repeatable");
  app.add_option("--out,-o", out_dir, "output directory (default from output.directory)");
  app.add_option("--figure,-f", figure, "figure id, implies the figure scenario");
  app.add_flag("--quiet,-q", quiet, "suppress the summary line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  std::string text;
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  if (!scenario.empty()) sets.insert(sets.begin(), "scenario=" + scenario);
  if (!figure.empty()) {
    sets.insert(sets.begin(), "figure=" + figure);
    if (scenario.empty()) sets.insert(sets.begin(), "scenario=figure");
  }

  std::vector<const char*> ptrs;
  for (const auto& s : sets) ptrs.push_back(s.c_str());
  om_config* cfg = nullptr;
  om_status s = om_config_parse(text.c_str(), ptrs.data(), ptrs.size(), &cfg);
  if (s != OM_OK) {
    report(s);
    return exit_code(s);
  }
  if (!out_dir.empty() && (s = om_config_set(cfg, "output.directory", out_dir.c_str())) != OM_OK) {
    report(s);
    om_config_free(cfg);
    return exit_code(s);
  }

  om_result* result = nullptr;
  s = om_run(cfg, &result);
  if (s != OM_OK) {
    report(s);
    om_config_free(cfg);
    return exit_code(s);
  }
  if (out_dir.empty()) out_dir = om_config_value(cfg, "output.directory");
  s = om_result_write(result, out_dir.c_str());
  if (s != OM_OK) {
    report(s);
  } else if (!quiet) {
    for (size_t i = 0; i < om_result_warning_count(result); ++i)
      std::cerr << "warning: " << om_result_warning(result, i) << "\n";
    std::printf("%s: %zu rows -> %s/%s.csv\n", om_result_table_name(result, 0), om_result_rows(result, 0),
                out_dir.c_str(), om_result_table_name(result, 0));
  }
  om_result_free(result);
  om_config_free(cfg);
  return s == OM_OK ? kExitOk : 1;
}
