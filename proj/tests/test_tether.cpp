#include "doctest.h"
#include "optomech/tether.hpp"
#include "oracles.hpp"

using namespace optomech;
using namespace optomech::tether;

namespace {

const MaterialParams kSiN = MaterialParams::silicon_nitride();

RigidTetherSystem reference(double f_opt_hz, double mass_scale = 1.0) {
  RigidTetherSystem s;
  s.material = kSiN;
  s.membrane_mass = mass_scale * DiskGeometry{10e-6, ThicknessProfile::uniform(50e-9)}.mass(kSiN);
  s.tether = {50e-6, 50e-9};
  s.omega_opt = hz_to_rad(f_opt_hz);
  return s;
}

std::vector<double> fe_roots(const RigidTetherSystem& s, double omega_max) {
  oracle::BeamModel b{s.tether.length, s.tether.width, kSiN.youngs_modulus, kSiN.density,
                      s.membrane_mass, s.membrane_mass * s.omega_opt * s.omega_opt, 256};
  return oracle::beam_frequencies(b, omega_max);
}

// Optical frequency that puts the CM branch at the middle of plateau n.
double plateau_opt(const RigidTetherSystem& s, int n) {
  const double w = s.omega_from_gamma(n * std::numbers::pi + 0.75 * std::numbers::pi);
  const double wp = s.pendulum_frequency();
  return std::sqrt(w * w - wp * wp);
}

}  // namespace

TEST_CASE("reference system has M/m_t near 125") {
  CHECK(reference(0).mass_ratio() == doctest::Approx(125.66).epsilon(1e-3));
}

TEST_CASE("every root below 20 MHz matches the finite-element beam") {
  for (double f : {0.0, 3e5, 1e6, 3e6}) {
    const auto sys = reference(f);
    const double wmax = hz_to_rad(20e6);
    const auto modes = solve_tether_spectrum(sys, wmax);
    const auto fe = fe_roots(sys, hz_to_rad(21e6));
    REQUIRE(fe.size() >= modes.size());
    CHECK(modes.size() >= 14);
    for (std::size_t i = 0; i < modes.size(); ++i)
      CHECK(modes[i].omega == doctest::Approx(fe[i]).epsilon(5e-3));
    std::size_t fe_below = 0;
    for (double w : fe) fe_below += w < wmax;
    CHECK(fe_below == modes.size());
  }
}

TEST_CASE("residual vanishes at the roots") {
  const auto sys = reference(1e6);
  for (const auto& m : solve_tether_spectrum(sys, hz_to_rad(20e6)))
    CHECK(std::abs(characteristic_residual(m.omega, sys)) < 1e-8);
}

TEST_CASE("mode shapes meet the clamped and tip conditions") {
  const auto sys = reference(2e6);
  const auto modes = solve_tether_spectrum(sys, hz_to_rad(5e6));
  for (const auto& m : modes) {
    REQUIRE(m.shape.size() > 10);
    CHECK(m.shape.front() == 0.0);
    // Zero slope at the clamp makes the shape start quadratically.
    CHECK(m.shape[1] / m.shape[2] == doctest::Approx(0.25).epsilon(0.05));
  }
}

TEST_CASE("CM branch follows sqrt(omega_p^2 + omega_opt^2) on the plateaus") {
  const auto base = reference(0.0);
  const double wp = base.pendulum_frequency();
  for (int n = 1; n <= 4; ++n) {
    auto sys = base;
    sys.omega_opt = plateau_opt(base, n);
    const auto modes = solve_tether_spectrum(sys, hz_to_rad(20e6));
    const auto& cm = cm_branch(modes, sys);
    CHECK(cm.kind == ModeKind::CM);
    CHECK(cm.omega == doctest::Approx(std::hypot(wp, sys.omega_opt)).epsilon(0.01));
  }
}

TEST_CASE("mid-plateau energy ratio is near 8 M / m_t") {
  auto sys = reference(0.0);
  sys.omega_opt = plateau_opt(sys, 3);
  const auto modes = solve_tether_spectrum(sys, hz_to_rad(20e6));
  const double r = tether_energy_ratio(cm_branch(modes, sys), sys);
  const double target = 8.0 * sys.mass_ratio();
  CHECK(r > target / 2.0);
  CHECK(r < target * 2.0);
}

TEST_CASE("avoided crossing narrows with a heavier membrane") {
  const auto gap_at = [](double scale) {
    auto sys = reference(0.0, scale);
    const auto asym = tether_asymptotes(sys, hz_to_rad(3e6));
    const double wn = asym.at(2);
    const double wp = sys.pendulum_frequency();
    sys.omega_opt = std::sqrt(wn * wn - wp * wp);
    const auto modes = solve_tether_spectrum(sys, hz_to_rad(5e6));
    double lo = 0.0, hi = kInfinity;
    for (const auto& m : modes) {
      if (m.omega <= wn) lo = std::max(lo, m.omega);
      else hi = std::min(hi, m.omega);
    }
    return (hi - lo) / wn;
  };
  const double g1 = gap_at(1.0), g4 = gap_at(4.0);
  CHECK(g4 < g1);
  CHECK(g4 == doctest::Approx(g1 / 2.0).epsilon(0.2));
}

TEST_CASE("asymptotes solve cos g tanh g = sin g") {
  const auto sys = reference(0.0);
  for (double w : tether_asymptotes(sys, hz_to_rad(20e6))) {
    const double g = sys.gamma(w);
    CHECK(std::cos(g) * std::tanh(g) - std::sin(g) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("composition adds strain energies") {
  CHECK(composed_energy_ratio(1000.0, 1000.0) == doctest::Approx(500.0));
  CHECK(composed_energy_ratio(kInfinity, 700.0) == doctest::Approx(700.0));
  CHECK(composed_energy_ratio(2000.0, 50.0) < 50.0);
}

TEST_CASE("invalid tether input is rejected") {
  auto sys = reference(1e6);
  sys.tether.width = 0.0;
  CHECK_THROWS_AS(solve_tether_spectrum(sys, hz_to_rad(1e6)), InvalidInput);
}
