// Independent reference calculations for the tests. None of these share code
// with the library solvers: the plate oracle uses Bessel functions instead of
// the Ritz basis, the beam oracle a finite-element discretization instead of
// the transcendental end conditions, and so on.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <boost/math/tools/roots.hpp>

namespace oracle {

constexpr double kPi = std::numbers::pi;

// ---- free uniform disk ------------------------------------------------------
// f = A J_m(lr) + C I_m(lr). Rows: vanishing radial moment and Kirchhoff shear at r = a,
//   f'' + nu (f'/r - m^2 f/r^2) = 0,   (lap f)' - (1 - nu)(m^2/r^2)(f' - f/r) = 0.
inline double free_disk_determinant(double x, int m, double nu) {
  using boost::math::cyl_bessel_i;
  using boost::math::cyl_bessel_i_prime;
  using boost::math::cyl_bessel_j;
  using boost::math::cyl_bessel_j_prime;
  const double mm = double(m) * m;
  const double j = cyl_bessel_j(m, x), jp = cyl_bessel_j_prime(m, x);
  const double i = cyl_bessel_i(m, x), ip = cyl_bessel_i_prime(m, x);
  const double jpp = -jp / x - (1.0 - mm / (x * x)) * j;
  const double ipp = -ip / x + (1.0 + mm / (x * x)) * i;
  // Unit radius, so r = 1 and derivatives are with respect to x = l a.
  const double mj = jpp + nu * (jp / x - mm * j / (x * x));
  const double mi = ipp + nu * (ip / x - mm * i / (x * x));
  const double vj = -jp - (1.0 - nu) * mm / (x * x) * (jp - j / x);
  const double vi = ip - (1.0 - nu) * mm / (x * x) * (ip - i / x);
  return (mj * vi - mi * vj) / (i * i);
}

/// Nondimensional roots x = l a of the free-edge problem, ascending, excluding rigid motion.
inline std::vector<double> free_disk_roots(int m, double nu, int count) {
  std::vector<double> roots;
  double x0 = 0.3, f0 = free_disk_determinant(x0, m, nu);
  for (double x1 = x0 + 1e-3; roots.size() < std::size_t(count) && x1 < 60.0; x1 += 1e-3) {
    const double f1 = free_disk_determinant(x1, m, nu);
    if (f0 * f1 < 0.0) {
      boost::uintmax_t it = 200;
      const auto r = boost::math::tools::toms748_solve(
          [&](double x) { return free_disk_determinant(x, m, nu); }, x0, x1, f0, f1,
          boost::math::tools::eps_tolerance<double>(50), it);
      roots.push_back(0.5 * (r.first + r.second));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

/// omega = (x/a)^2 sqrt(D / (rho d)), D = E d^3 / (12 (1 - nu^2)).
inline double free_disk_omega(double x, double a, double d, double e, double nu, double rho) {
  const double dd = e * d * d * d / (12.0 * (1.0 - nu * nu));
  return (x / a) * (x / a) * std::sqrt(dd / (rho * d));
}

// ---- cantilever with tip mass and tip spring, Hermite cubic elements --------
struct BeamModel {
  double length, width, youngs, density, tip_mass, tip_stiffness;
  int elements = 256;
};

inline std::vector<double> beam_frequencies(const BeamModel& b, double omega_max) {
  const int n = b.elements, dof = 2 * n;  // clamped node removed
  const double h = b.length / n;
  const double ei = b.youngs * std::pow(b.width, 4) / 12.0;
  const double rho_a = b.density * b.width * b.width;
  Eigen::Matrix4d ke, me;
  ke << 12, 6 * h, -12, 6 * h, 6 * h, 4 * h * h, -6 * h, 2 * h * h, -12, -6 * h, 12, -6 * h, 6 * h,
      2 * h * h, -6 * h, 4 * h * h;
  ke *= ei / (h * h * h);
  me << 156, 22 * h, 54, -13 * h, 22 * h, 4 * h * h, 13 * h, -3 * h * h, 54, 13 * h, 156, -22 * h,
      -13 * h, -3 * h * h, -22 * h, 4 * h * h;
  me *= rho_a * h / 420.0;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(dof + 2, dof + 2), m = k;
  for (int e = 0; e < n; ++e) {
    k.block<4, 4>(2 * e, 2 * e) += ke;
    m.block<4, 4>(2 * e, 2 * e) += me;
  }
  k(dof, dof) += b.tip_stiffness;
  m(dof, dof) += b.tip_mass;
  const Eigen::MatrixXd kr = k.bottomRightCorner(dof, dof), mr = m.bottomRightCorner(dof, dof);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(kr, mr);
  std::vector<double> out;
  for (int i = 0; i < dof; ++i) {
    const double w = std::sqrt(std::max(0.0, eig.eigenvalues()[i]));
    if (w <= omega_max) out.push_back(w);
  }
  return out;
}

// ---- Hankel integral by adaptive quadrature ---------------------------------
template <class F>
double hankel_integral(F f, double k, double r_max) {
  const auto g = [&](double r) { return f(r) * boost::math::cyl_bessel_j(0, k * r) * r; };
  double total = 0.0;
  const int panels = 64;
  for (int p = 0; p < panels; ++p)
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        g, r_max * p / panels, r_max * (p + 1) / panels, 8, 1e-13);
  return total;
}

// ---- paraxial Gaussian beam -------------------------------------------------
/// Field of a beam with E(r, 0) = exp(-r^2/w0^2), including exp(i k z).
inline std::complex<double> gaussian_beam(double r, double z, double w0, double lambda) {
  const double k = 2.0 * kPi / lambda;
  const double zr = kPi * w0 * w0 / lambda;
  const double w = w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
  const double gouy = std::atan(z / zr);
  const double inv_r = z / (z * z + zr * zr);
  const double phase = k * z - gouy + 0.5 * k * r * r * inv_r;
  return (w0 / w) * std::exp(-r * r / (w * w)) * std::polar(1.0, phase);
}

inline double gaussian_waist(double z, double w0, double lambda) {
  const double zr = kPi * w0 * w0 / lambda;
  return w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
}

// ---- dielectric slab by characteristic matrix -------------------------------
/// Reflection and transmission of a slab of index n, thickness d, in vacuum,
/// with the exp(+i k z) convention; both referred to the front face.
struct Slab {
  std::complex<double> r, t;
};

inline Slab slab_transfer_matrix(double n, double d, double lambda) {
  const double delta = n * 2.0 * kPi / lambda * d;
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> m11 = std::cos(delta), m12 = -i * std::sin(delta) / n,
                             m21 = -i * n * std::sin(delta), m22 = std::cos(delta);
  const std::complex<double> den = m11 + m12 + m21 + m22;
  return {(m11 + m12 - m21 - m22) / den, 2.0 / den};
}

}  // namespace oracle
