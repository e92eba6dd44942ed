#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string err;
};

const fs::path kWork = fs::temp_directory_path() / "optomech_cli_test";

Run run(const std::string& args) {
  fs::create_directories(kWork);
  const fs::path err = kWork / "stderr.txt";
  const std::string cmd = std::string(OPTOMECH_CLI) + " " + args + " >/dev/null 2>" + err.string();
  const int status = std::system(cmd.c_str());
  std::ifstream f(err);
  std::stringstream ss;
  ss << f.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string read(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("figure run writes CSV and meta.json") {
  const fs::path out = kWork / "fig2a";
  fs::remove_all(out);
  const Run r = run("--figure fig2a -s sweep.points=3 --out " + out.string());
  REQUIRE(r.code == 0);
  const std::string csv = read(out / "fig2a.csv");
  CHECK(csv.rfind("trap.intensity[W/m^2],m[1],n[1],frequency[Hz],energy_ratio[1]\n", 0) == 0);
  const auto meta = nlohmann::json::parse(read(out / "meta.json"));
  CHECK(meta["scenario"] == "figure");
  CHECK(meta["figure"] == "fig2a");
  CHECK(meta["version"] == "0.1.0");
  CHECK(meta["config"]["sweep.points"] == 3);
  CHECK(meta.contains("wall_time_s"));
}

TEST_CASE("config file plus overrides") {
  const fs::path cfg = kWork / "spring.yaml";
  fs::create_directories(kWork);
  std::ofstream(cfg) << "scenario: spring\nspring:\n  finesse: 2.0e5\n";
  const fs::path out = kWork / "spring";
  const Run r = run("-c " + cfg.string() + " -s spring.target_n_osc=100 -o " + out.string());
  REQUIRE(r.code == 0);
  const auto meta = nlohmann::json::parse(read(out / "meta.json"));
  CHECK(meta["config"]["spring.finesse"] == doctest::Approx(2e5));
  CHECK(meta["config"]["spring.target_n_osc"] == doctest::Approx(100.0));
}

TEST_CASE("validation errors exit 2 and list every problem") {
  const Run r = run("thermo -s disk.radius=-1 -s trap.waisst=1 -o " + (kWork / "bad").string());
  CHECK(r.code == 2);
  CHECK(r.err.find("disk.radius") != std::string::npos);
  CHECK(r.err.find("did you mean 'trap.waist'") != std::string::npos);
  CHECK_FALSE(fs::exists(kWork / "bad"));
  CHECK(run("--no-such-flag").code == 2);
  CHECK(run("--config /nonexistent/file.yaml").code == 2);
}

TEST_CASE("solver failures exit 3") {
  const Run r = run("cavity -s cavity.max_iterations=1 -o " + (kWork / "cav").string());
  CHECK(r.code == 3);
  CHECK(r.err.find("did not converge") != std::string::npos);
}

TEST_CASE("help lists the keys") {
  CHECK(run("--help").code == 0);
  CHECK(run("--version").code == 0);
}
