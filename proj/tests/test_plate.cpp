#include <chrono>

#include "doctest.h"
#include "optomech/plate.hpp"
#include "oracles.hpp"

using namespace optomech;

namespace {

const MaterialParams kSiN = MaterialParams::silicon_nitride();
const DiskGeometry kDisk{10e-6, ThicknessProfile::uniform(50e-9)};

std::vector<plate::ModeSolution> modes_for(const DiskGeometry& disk, const IntensityProfile& i, int m,
                                           int k = 5, int nodes = 96) {
  plate::RadialGrid g;
  g.m = m;
  g.n_points = nodes;
  return plate::solve_modes(plate::assemble_plate_operator(disk, kSiN, OpticalParams{}, i, g), k);
}

}  // namespace

TEST_CASE("natural frequencies match the Bessel free-edge determinant") {
  for (int m = 0; m <= 3; ++m) {
    const auto roots = oracle::free_disk_roots(m, kSiN.poisson_ratio, 3);
    REQUIRE(roots.size() == 3);
    const auto modes = modes_for(kDisk, IntensityProfile::plane_wave(0.0), m);
    // m = 0 and m = 1 start with a rigid-body mode at zero frequency.
    const int offset = m <= 1 ? 1 : 0;
    for (int i = 0; i < 3; ++i) {
      const double expect = oracle::free_disk_omega(roots[i], kDisk.radius, 50e-9, kSiN.youngs_modulus,
                                                    kSiN.poisson_ratio, kSiN.density);
      CHECK(modes[i + offset].omega == doctest::Approx(expect).epsilon(1e-6));
      CHECK(modes[i + offset].n == i + offset);
    }
  }
}

TEST_CASE("fundamental flexural mode of the reference disk sits near 1.3 MHz") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto modes = modes_for(kDisk, IntensityProfile::plane_wave(0.0), 2, 1);
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(modes[0].frequency_hz() == doctest::Approx(1.3e6).epsilon(0.05));
  CHECK(dt < 5.0);
}

TEST_CASE("rigid modes at zero intensity") {
  const auto m0 = modes_for(kDisk, IntensityProfile::plane_wave(0.0), 0, 2);
  const auto m1 = modes_for(kDisk, IntensityProfile::plane_wave(0.0), 1, 2);
  CHECK(m0[0].omega < 1e-3 * m0[1].omega);
  CHECK(m1[0].omega < 1e-3 * m1[1].omega);
}

TEST_CASE("plane-wave trap adds omega_opt^2 to every mode") {
  const double w_opt = hz_to_rad(1e6);
  const double i0 = intensity_for_trap_frequency(kSiN, OpticalParams{}, w_opt);
  for (int m = 0; m <= 2; ++m) {
    const auto free = modes_for(kDisk, IntensityProfile::plane_wave(0.0), m, 4);
    const auto held = modes_for(kDisk, IntensityProfile::plane_wave(i0), m, 4);
    for (int i = 0; i < 4; ++i) {
      const double lhs = held[i].omega * held[i].omega - free[i].omega * free[i].omega;
      CHECK(lhs / (w_opt * w_opt) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("plane-wave CM mode stores no strain energy") {
  const double i0 = intensity_for_trap_frequency(kSiN, OpticalParams{}, hz_to_rad(5e5));
  const auto modes = modes_for(kDisk, IntensityProfile::plane_wave(i0), 0, 2);
  CHECK(modes[0].frequency_hz() == doctest::Approx(5e5).epsilon(1e-9));
  CHECK(std::isinf(plate::energy_ratio(modes[0])));
  CHECK(modes[1].u_mech > 0.0);
}

TEST_CASE("Gaussian trap raises the CM ratio as the beam widens") {
  const double i0 = intensity_for_trap_frequency(kSiN, OpticalParams{}, hz_to_rad(1e6));
  double prev = 0.0;
  for (double w : {5e-6, 10e-6, 20e-6, 40e-6}) {
    const auto modes = modes_for(kDisk, IntensityProfile::gaussian(i0, w), 0, 1);
    const double r = plate::energy_ratio(modes[0]);
    CHECK(r > prev);
    prev = r;
  }
}

TEST_CASE("tuning reaches the target CM frequency") {
  const auto t = plate::tune_lowest_mode(kDisk, kSiN, OpticalParams{}, IntensityProfile::gaussian(1.0, 35e-6),
                                         plate::RadialGrid{}, hz_to_rad(1e6));
  CHECK(t.mode.frequency_hz() == doctest::Approx(1e6).epsilon(1e-6));
  CHECK(t.intensity_scale > 0.0);
  CHECK_THROWS_AS(plate::tune_lowest_mode(kDisk, kSiN, OpticalParams{}, IntensityProfile::plane_wave(0.0),
                                          plate::RadialGrid{}, hz_to_rad(1e6)),
                  InvalidInput);
}

TEST_CASE("apodized disk: fundamental converges, overtones are decreasing Ritz bounds") {
  const DiskGeometry apo{10e-6, ThicknessProfile::apodized(50e-9)};
  const auto coarse = modes_for(apo, IntensityProfile::plane_wave(0.0), 2, 2, 48);
  const auto mid = modes_for(apo, IntensityProfile::plane_wave(0.0), 2, 2, 96);
  const auto fine = modes_for(apo, IntensityProfile::plane_wave(0.0), 2, 2, 192);
  CHECK(mid[0].omega == doctest::Approx(fine[0].omega).epsilon(1e-6));
  CHECK(coarse[0].omega == doctest::Approx(fine[0].omega).epsilon(1e-4));
  // Stiffness vanishes at the rim, so overtones keep sinking into the edge.
  CHECK(mid[1].omega <= coarse[1].omega);
  CHECK(fine[1].omega <= mid[1].omega);
}

TEST_CASE("strain energy splits into bulk and boundary parts") {
  const auto mode = modes_for(kDisk, IntensityProfile::plane_wave(0.0), 2, 1)[0];
  const double full = plate::strain_energy(mode, kDisk, kSiN);
  const double bulk = plate::strain_energy_bulk(mode, kDisk, kSiN);
  CHECK(full == doctest::Approx(mode.u_mech).epsilon(1e-10));
  CHECK(bulk > 0.0);
  CHECK(bulk < full);
}

TEST_CASE("invalid geometry is rejected") {
  const DiskGeometry bad{-1e-6, ThicknessProfile::uniform(50e-9)};
  CHECK_THROWS_AS(modes_for(bad, IntensityProfile::plane_wave(0.0), 0), InvalidInput);
  plate::RadialGrid g;
  g.n_points = 4;
  CHECK_THROWS_AS(plate::assemble_plate_operator(kDisk, kSiN, OpticalParams{}, IntensityProfile::plane_wave(0.0), g),
                  InvalidInput);
}

TEST_CASE("thick disks carry the thin-plate warning") {
  CHECK_FALSE(kDisk.thin_plate_warning());
  CHECK(DiskGeometry{1e-6, ThicknessProfile::uniform(100e-9)}.thin_plate_warning());
}
