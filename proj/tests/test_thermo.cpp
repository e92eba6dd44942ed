#include "doctest.h"
#include "optomech/plate.hpp"
#include "optomech/thermo.hpp"
#include "oracles.hpp"

using namespace optomech;

namespace {

const MaterialParams kSiN = MaterialParams::silicon_nitride();
const DiskGeometry kDisk{10e-6, ThicknessProfile::uniform(50e-9)};
const BathParams kRoom{300.0};

plate::ModeSolution natural(int m, int index, const DiskGeometry& disk = kDisk,
                            const MaterialParams& mat = kSiN, double i0 = 0.0) {
  plate::RadialGrid g;
  g.m = m;
  const auto op = plate::assemble_plate_operator(disk, mat, OpticalParams{}, IntensityProfile::plane_wave(i0), g);
  return plate::solve_modes(op, index + 1)[index];
}

// Integral of (lap f)^2 over the disk for the Bessel-form (2,0) mode, max |f| = 1.
double bessel_curvature_20(double a) {
  const double nu = kSiN.poisson_ratio;
  const double x = oracle::free_disk_roots(2, nu, 1)[0];
  using boost::math::cyl_bessel_i;
  using boost::math::cyl_bessel_j;
  const double j = cyl_bessel_j(2, x), jp = boost::math::cyl_bessel_j_prime(2, x);
  const double i = cyl_bessel_i(2, x), ip = boost::math::cyl_bessel_i_prime(2, x);
  const double jpp = -jp / x - (1.0 - 4.0 / (x * x)) * j;
  const double ipp = -ip / x + (1.0 + 4.0 / (x * x)) * i;
  const double c = -(jpp + nu * (jp / x - 4.0 * j / (x * x))) / (ipp + nu * (ip / x - 4.0 * i / (x * x)));
  double fmax = 0.0;
  for (int k = 0; k <= 4000; ++k) {
    const double u = x * k / 4000.0;
    fmax = std::max(fmax, std::abs(cyl_bessel_j(2, u) + c * cyl_bessel_i(2, u)));
  }
  const auto lap2 = [&](double r) {
    const double u = x * r / a;
    const double l = (x / a) * (x / a) * (-cyl_bessel_j(2, u) + c * cyl_bessel_i(2, u)) / fmax;
    return l * l * r;
  };
  return std::numbers::pi *
         boost::math::quadrature::gauss_kronrod<double, 61>::integrate(lap2, 0.0, a, 10, 1e-13);
}

}  // namespace

TEST_CASE("closed-form Q f of a 50 nm film is about 4e13 Hz") {
  const double qf = thermo::qf_product_limit(kSiN, 50e-9, kRoom, 0.0);
  CHECK(qf == doctest::Approx(4e13).epsilon(0.15));
  const double n = thermo::n_osc_th(qf, kRoom);
  CHECK(n > 0.1);
  CHECK(n < 10.0);
  CHECK(thermo::ground_state_threshold(kRoom) == doctest::Approx(6e12).epsilon(0.05));
}

TEST_CASE("Q f is linear in one plus the energy ratio") {
  const double base = thermo::qf_product_limit(kSiN, 50e-9, kRoom, 0.0);
  CHECK(thermo::qf_product_limit(kSiN, 50e-9, kRoom, 999.0) == doctest::Approx(1000.0 * base).epsilon(1e-12));
  CHECK(std::isinf(thermo::qf_product_limit(kSiN, 50e-9, kRoom, kInfinity)));
  CHECK_THROWS_AS(thermo::qf_product_limit(kSiN, 0.0, kRoom, 0.0), InvalidInput);
}

TEST_CASE("ratio 1e3 at 1 MHz gives about 1e3 coherent oscillations") {
  const double qf = thermo::qf_product_limit(kSiN, 50e-9, kRoom, 1e3);
  const double n = thermo::n_osc_th(qf, kRoom);
  CHECK(n > 1e2);
  CHECK(n < 1e4);
  CHECK(thermo::n_osc_th(0.0, kRoom) == 0.0);
}

TEST_CASE("work per cycle matches the Bessel-mode curvature integral") {
  const auto mode = natural(2, 0);
  const double expect_curv = bessel_curvature_20(kDisk.radius);
  CHECK(plate::curvature_integral(mode, kDisk, 0) == doctest::Approx(expect_curv).epsilon(1e-6));

  const double e = kSiN.youngs_modulus, al = kSiN.thermal_expansion_vol, s = kSiN.poisson_ratio;
  const double d = 50e-9;
  const double expect = std::numbers::pi * mode.omega * al * al * e * e * std::pow(d, 5) * 300.0 /
                        (1080.0 * kSiN.thermal_conductivity * (1 - s) * (1 - s)) * expect_curv;
  CHECK(thermo::thermoelastic_work(mode, kDisk, kSiN, kRoom) == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("rigid and CM profiles dissipate nothing") {
  const double i0 = intensity_for_trap_frequency(kSiN, OpticalParams{}, hz_to_rad(1e6));
  const auto cm = natural(0, 0, kDisk, kSiN, i0);
  const auto tilt = natural(1, 0, kDisk, kSiN, i0);
  const double ref = thermo::thermoelastic_work(natural(2, 0), kDisk, kSiN, kRoom);
  CHECK(thermo::thermoelastic_work(cm, kDisk, kSiN, kRoom) < 1e-12 * ref);
  CHECK(thermo::thermoelastic_work(tilt, kDisk, kSiN, kRoom) < 1e-12 * ref);
}

TEST_CASE("work scales with alpha^2, d^5 and omega") {
  const auto mode = natural(2, 0);
  const double w1 = thermo::thermoelastic_work(mode, kDisk, kSiN, kRoom);

  MaterialParams hot = kSiN;
  hot.thermal_expansion_vol *= 2.0;
  CHECK(thermo::thermoelastic_work(mode, kDisk, hot, kRoom) == doctest::Approx(4.0 * w1).epsilon(1e-12));

  auto faster = mode;
  faster.omega *= 3.0;
  CHECK(thermo::thermoelastic_work(faster, kDisk, kSiN, kRoom) == doctest::Approx(3.0 * w1).epsilon(1e-12));

  const DiskGeometry thick{10e-6, ThicknessProfile::uniform(100e-9)};
  auto same_shape = mode;  // shape in r/a is fixed; only the thickness changes
  CHECK(thermo::thermoelastic_work(same_shape, thick, kSiN, kRoom) == doctest::Approx(32.0 * w1).epsilon(1e-10));
}

TEST_CASE("doubling the bath temperature halves Q") {
  const auto mode = natural(2, 0);
  const double q1 = thermo::q_thermoelastic(mode, kDisk, kSiN, BathParams{300.0});
  const double q2 = thermo::q_thermoelastic(mode, kDisk, kSiN, BathParams{600.0});
  CHECK(q2 == doctest::Approx(0.5 * q1).epsilon(1e-12));
}

TEST_CASE("Q is 2 pi stored energy over work") {
  const double i0 = intensity_for_trap_frequency(kSiN, OpticalParams{}, hz_to_rad(2e6));
  const auto mode = natural(2, 0, kDisk, kSiN, i0);
  const auto r = thermo::analyze(mode, kDisk, kSiN, kRoom);
  CHECK(r.q_factor == doctest::Approx(2.0 * std::numbers::pi * (mode.u_opt + mode.u_mech) / r.delta_w).epsilon(1e-12));
  CHECK(r.qf_product == doctest::Approx(r.q_factor * mode.frequency_hz()).epsilon(1e-12));
  CHECK(mode.omega < r.diffusion_frequency);
}

TEST_CASE("plane-wave CM mode is effectively lossless") {
  const double i0 = intensity_for_trap_frequency(kSiN, OpticalParams{}, hz_to_rad(1e6));
  const auto r = thermo::analyze(natural(0, 0, kDisk, kSiN, i0), kDisk, kSiN, kRoom);
  CHECK(r.q_factor > 1e30);
}

TEST_CASE("zero work gives the infinity sentinel") {
  auto mode = natural(2, 0);
  mode.omega = 0.0;
  CHECK(std::isinf(thermo::q_thermoelastic(mode, kDisk, kSiN, kRoom)));
}
