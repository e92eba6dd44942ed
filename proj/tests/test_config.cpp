#include <algorithm>

#include "doctest.h"
#include "optomech/config.hpp"
#include "optomech/scenario.hpp"

using namespace optomech;
using namespace optomech::config;

namespace {

bool any_contains(const std::vector<std::string>& errors, const std::string& needle) {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("minimal figure config is valid") {
  const auto v = validate_config("scenario: figure\nfigure: fig2a\n");
  REQUIRE(v.ok());
  CHECK(v.config->text("figure") == "fig2a");
  CHECK(v.config->number("disk.radius") == doctest::Approx(10e-6));
}

TEST_CASE("figure alone implies the figure scenario") {
  const auto v = validate_config("figure: fig4b\n");
  REQUIRE(v.ok());
  CHECK(v.config->text("scenario") == "figure");
}

TEST_CASE("nested maps and dotted keys are equivalent") {
  const auto a = validate_config("disk:\n  radius: 2.0e-5\n");
  const auto b = validate_config("disk.radius: 2.0e-5\n");
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(a.config->number("disk.radius") == b.config->number("disk.radius"));
}

TEST_CASE("JSON documents are accepted") {
  const auto v = validate_config(R"({"scenario": "thermo", "disk": {"thickness": 3e-8}})");
  REQUIRE(v.ok());
  CHECK(v.config->number("disk.thickness") == doctest::Approx(3e-8));
}

TEST_CASE("negative radius is rejected and named") {
  const auto v = validate_config("disk:\n  radius: -1e-6\n");
  CHECK_FALSE(v.ok());
  CHECK(any_contains(v.errors, "disk.radius"));
}

TEST_CASE("misspelled key suggests the nearest one") {
  const auto v = validate_config("trap:\n  waisst: 3e-5\n");
  CHECK_FALSE(v.ok());
  CHECK(any_contains(v.errors, "trap.waisst"));
  CHECK(any_contains(v.errors, "did you mean 'trap.waist'"));
  CHECK(nearest_key("grid.quadratur") == "grid.quadrature");
}

TEST_CASE("empty sweep range is an error") {
  const auto v = validate_config("sweep:\n  key: disk.radius\n  start: 1e-5\n  stop: 1e-5\n  points: 5\n");
  CHECK_FALSE(v.ok());
  CHECK(any_contains(v.errors, "sweep range is empty"));
}

TEST_CASE("every error is reported, not only the first") {
  const auto v = validate_config("disk:\n  radius: -1\n  thickness: 0\nmaterial:\n  poisson_ratio: 0.7\nbogus: 1\n");
  CHECK_FALSE(v.ok());
  CHECK(v.errors.size() >= 4);
  CHECK(any_contains(v.errors, "disk.radius"));
  CHECK(any_contains(v.errors, "disk.thickness"));
  CHECK(any_contains(v.errors, "material.poisson_ratio"));
  CHECK(any_contains(v.errors, "bogus"));
}

TEST_CASE("type, choice and cross-key errors") {
  CHECK_FALSE(validate_config("grid:\n  modes: 2.5\n").ok());
  CHECK_FALSE(validate_config("trap:\n  kind: bessel\n").ok());
  CHECK_FALSE(validate_config("disk:\n  radius: wide\n").ok());
  CHECK_FALSE(validate_config("cavity:\n  mirror_roc: 5e-3\n").ok());
  CHECK_FALSE(validate_config("cavity:\n  aperture: 1e-4\n").ok());
  CHECK_FALSE(validate_config("sweep:\n  key: disk.profile\n  start: 0\n  stop: 1\n  points: 3\n").ok());
  CHECK_FALSE(validate_config("sweep:\n  key: disk.radius\n  start: 0\n  stop: 1e-5\n  points: 3\n  spacing: log\n").ok());
  CHECK_FALSE(validate_config("sweep:\n  points: 3\n").ok());
  CHECK_FALSE(validate_config("- a\n- b\n").ok());
  CHECK_FALSE(validate_config("disk: [unclosed\n").ok());
}

TEST_CASE("overrides apply after the file") {
  const auto v = validate_config("disk:\n  radius: 2e-5\n", {"disk.radius=3e-5", "grid.modes=4"});
  REQUIRE(v.ok());
  CHECK(v.config->number("disk.radius") == doctest::Approx(3e-5));
  CHECK(v.config->integer("grid.modes") == 4);
  CHECK(v.config->is_explicit("disk.radius"));
  CHECK_FALSE(v.config->is_explicit("disk.thickness"));
  CHECK_FALSE(validate_config("", {"no-equals-sign"}).ok());
}

TEST_CASE("sweep values are linear or logarithmic and inclusive") {
  auto v = validate_config("sweep:\n  key: disk.radius\n  start: 1e-5\n  stop: 4e-5\n  points: 4\n");
  REQUIRE(v.ok());
  auto s = scenario::sweep_values(*v.config);
  REQUIRE(s.size() == 4);
  CHECK(s[1] == doctest::Approx(2e-5));
  CHECK(s.back() == doctest::Approx(4e-5));
  v = validate_config("sweep:\n  key: disk.radius\n  start: 1e-6\n  stop: 1e-4\n  points: 3\n  spacing: log\n");
  REQUIRE(v.ok());
  s = scenario::sweep_values(*v.config);
  CHECK(s[1] == doctest::Approx(1e-5));
}

TEST_CASE("config echo round-trips through JSON") {
  const auto v = validate_config("", {"disk.radius=1.5e-5", "trap.kind=gaussian"});
  REQUIRE(v.ok());
  const auto again = validate_config(v.config->to_json().dump());
  REQUIRE(again.ok());
  CHECK(again.config->values() == v.config->values());
}

TEST_CASE("CSV output is deterministic across runs and thread counts") {
  const std::string text = "figure: fig2a\nsweep:\n  points: 6\n";
  auto one = validate_config(text, {"run.threads=1"});
  auto four = validate_config(text, {"run.threads=4"});
  REQUIRE(one.ok());
  REQUIRE(four.ok());
  const auto a = scenario::run_scenario(*one.config);
  const auto b = scenario::run_scenario(*one.config);
  const auto c = scenario::run_scenario(*four.config);
  REQUIRE(a.tables.size() == c.tables.size());
  CHECK(a.tables[0].rows.size() == 6u * 8u);
  for (std::size_t i = 0; i < a.tables.size(); ++i) {
    CHECK(a.tables[i].to_csv() == b.tables[i].to_csv());
    CHECK(a.tables[i].to_csv() == c.tables[i].to_csv());
  }
}

TEST_CASE("solver failures keep their class and gain the scenario context") {
  const auto v = validate_config("scenario: cavity\ncavity:\n  max_iterations: 1\n");
  REQUIRE(v.ok());
  try {
    scenario::run_scenario(*v.config);
    FAIL("expected a NumericalFailure");
  } catch (const NumericalFailure& e) {
    CHECK(std::string(e.what()).find("cavity") != std::string::npos);
  }
}
