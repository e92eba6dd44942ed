// Rigid membrane of mass M on a clamped Euler-Bernoulli tether, the membrane
// held by an optical spring of frequency omega_opt.
//
//   phi(0) = phi'(0) = 0,  phi''(L) = 0,  EI phi'''(L) = M (omega_opt^2 - omega^2) phi(L),
//
// with EI = E b^4 / 12 and dispersion omega = (k / beta)^2, beta = (12 rho / (E b^2))^(1/4).

#pragma once

#include <string>
#include <vector>

#include "optomech/core.hpp"

namespace optomech::tether {

struct RigidTetherSystem {
  double membrane_mass = 0.0;  // kg
  TetherGeometry tether;
  MaterialParams material;
  double omega_opt = 0.0;  // rad/s

  double tether_mass() const;
  double mass_ratio() const { return membrane_mass / tether_mass(); }
  double beta() const;                // s^(1/2)/m
  double bending_stiffness() const;   // EI = E b^4 / 12
  double gamma(double omega) const;   // beta L sqrt(omega)
  double omega_from_gamma(double gamma) const;
  /// sqrt(E b^4 / (4 M L^3)), the tip-spring frequency of the loaded cantilever.
  double pendulum_frequency() const;
  void validate() const;
};

enum class ModeKind { CM, Tether, Mixed };
std::string to_string(ModeKind kind);

struct TetherMode {
  double omega = 0.0;
  // phi = c1 (sin kx - sinh kx) + c2 (cos kx - cosh kx). For evaluation the
  // equivalent bounded form c1 (sin kx - cos kx + e^{-kx})
  //   + tail (2 e^{-gamma} cos kx - e^{-k(L-x)} - e^{-gamma} e^{-kx})
  // is used, with c2 = 2 tail e^{-gamma} - c1.
  double c1 = 0.0;
  double c2 = 0.0;
  double tail = 0.0;
  ModeKind kind = ModeKind::Tether;
  int tether_index = 0;  // nearest clamped-pinned asymptote, 0 for the CM branch
  std::vector<double> x;
  std::vector<double> shape;
  double u_opt = 0.0;
  double u_mech = 0.0;

  double tip() const { return shape.back(); }
};

/// Scaled determinant of the end-condition matrix,
///   M (w^2 - w_opt^2)(cos g sinh g - sin g cosh g) + EI k^3 (1 + cos g cosh g),
/// divided by cosh(g) and by M (w^2 + w_opt^2) + EI k^3 so it stays O(1).
double characteristic_residual(double omega, const RigidTetherSystem& sys);

/// Frequencies of the heavy-membrane limit, roots of cos g tanh g = sin g, up to omega_max.
std::vector<double> tether_asymptotes(const RigidTetherSystem& sys, double omega_max);

/// Half-width of the avoided crossing between the CM branch and asymptote omega_n.
double crossing_half_gap(double omega_n, const RigidTetherSystem& sys);

std::vector<TetherMode> solve_tether_spectrum(const RigidTetherSystem& sys, double omega_max);

TetherMode tether_mode_shape(double omega, const RigidTetherSystem& sys);

/// U_opt / U_mech with U_opt = M w_opt^2 phi(L)^2 / 2 and U_mech = EI/2 int phi''^2.
double tether_energy_ratio(const TetherMode& mode, const RigidTetherSystem& sys);

/// Series composition 1 / (1/disk + 1/tether); strain energies add at fixed U_opt.
double composed_energy_ratio(double disk_ratio, double tether_ratio);

/// Mode of the spectrum whose classification is CM, or the one nearest
/// sqrt(omega_p^2 + omega_opt^2) when the CM branch is hybridized.
const TetherMode& cm_branch(const std::vector<TetherMode>& modes, const RigidTetherSystem& sys);

}  // namespace optomech::tether
