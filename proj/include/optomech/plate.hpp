// Flexural eigenmodes of a free, thin circular disk held in an optical trap.
//
// The radial problem for zeta = f(r) cos(m theta) is discretized with a
// Rayleigh-Ritz basis f(r) = (r/a)^m P_k(2 (r/a)^2 - 1), where P_k are Legendre
// polynomials. The r^m prefactor gives the correct regularity at the centre for
// every m, and because the stiffness form is built directly from the plate
// strain energy (including the (1 - sigma) Gaussian-curvature term with local
// bending stiffness d(r)^3) the free-edge conditions, vanishing bending moment
// and vanishing effective shear, are the natural boundary conditions of the
// variational problem and need no explicit boundary rows. All integrands are
// polynomials in s = (r/a)^2 times d(r) or I(r), so Gauss-Legendre quadrature
// in s is exact for the uniform and apodized thickness laws.

#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "optomech/core.hpp"

namespace optomech::plate {

/// Quadrature nodes in s = (r/a)^2 for a given azimuthal index.
struct RadialGrid {
  int m = 0;
  int n_points = 96;  // quadrature nodes
  int n_basis = 0;    // Ritz functions; 0 selects n_points / 3

  int basis_size() const { return n_basis > 0 ? n_basis : n_points / 3; }
  void validate() const;
};

/// Basis functions and the derivative combinations the energy forms need,
/// tabulated at the quadrature nodes (rows) for each basis function (columns).
/// Derivatives are with respect to the normalized radius r/a.
struct PlateBasis {
  RadialGrid grid;
  double radius = 0.0;
  Eigen::VectorXd s;       // nodes in (0, 1)
  Eigen::VectorXd weight;  // quadrature weight for the measure (r/a) d(r/a) = ds/2
  Eigen::VectorXd r;       // physical node radii, strictly increasing
  Eigen::MatrixXd value;      // f
  Eigen::MatrixXd laplacian;  // f'' + f'/r - m^2 f/r^2
  Eigen::MatrixXd second;     // f''
  Eigen::MatrixXd bend;       // f'/r - m^2 f/r^2
  Eigen::MatrixXd twist;      // f'/r - f/r^2
  Eigen::VectorXd column_scale;  // applied so the mass matrix has unit diagonal

  static std::shared_ptr<const PlateBasis> build(const RadialGrid& grid, double radius);

  /// f(r) for coefficients c, any r in [0, a].
  double evaluate(const Eigen::VectorXd& c, double r) const;
  /// Angular weight: integral of cos^2(m theta) over a full turn.
  double cos_weight() const;
  double sin_weight() const;
};

/// Discretized (stiffness, trap, mass) triple for one azimuthal index.
struct PlateOperator {
  std::shared_ptr<const PlateBasis> basis;
  DiskGeometry disk;
  MaterialParams material;
  Eigen::MatrixXd stiffness;  // 2 U_mech as a quadratic form
  Eigen::MatrixXd trap;       // 2 U_opt as a quadratic form
  Eigen::MatrixXd mass;       // kinetic form: 2 T = omega^2 x' M x
  bool thin_plate_warning = false;
};

struct ModeSolution {
  int m = 0;
  int n = 0;            // interior sign changes of f(r)
  double omega = 0.0;   // rad/s
  Eigen::VectorXd coefficients;  // normalized so max |f| = 1 on [0, a]
  std::vector<double> radii;     // r = 0, quadrature nodes, r = a
  std::vector<double> profile;   // f at radii
  double u_opt = 0.0;   // J at unit amplitude
  double u_mech = 0.0;  // J at unit amplitude
  std::shared_ptr<const PlateBasis> basis;

  double frequency_hz() const { return rad_to_hz(omega); }
  double operator()(double r) const { return basis->evaluate(coefficients, r); }
};

PlateOperator assemble_plate_operator(const DiskGeometry& disk, const MaterialParams& material,
                                      const OpticalParams& optics,
                                      const IntensityProfile& intensity, const RadialGrid& grid);

/// The k_modes lowest modes, ascending in frequency. Throws NumericalFailure if
/// the eigen-decomposition residual is not small.
std::vector<ModeSolution> solve_modes(const PlateOperator& op, int k_modes);

/// Strain energy from the full plate energy density including the (1 - sigma) term.
double strain_energy(const ModeSolution& mode, const DiskGeometry& disk,
                     const MaterialParams& material);

/// Strain energy keeping only the (lap zeta)^2 part of the energy density.
double strain_energy_bulk(const ModeSolution& mode, const DiskGeometry& disk,
                          const MaterialParams& material);

/// U_opt = 1/2 integral of rho d(r) omega_opt(r)^2 zeta^2 dA.
double optical_energy(const ModeSolution& mode, const DiskGeometry& disk,
                      const MaterialParams& material, const OpticalParams& optics,
                      const IntensityProfile& intensity);

/// Integral of d(r)^p (lap zeta)^2 over the disk area.
double curvature_integral(const ModeSolution& mode, const DiskGeometry& disk, int thickness_power);

inline constexpr double kStrainFloor = 1e-30;  // J, below this the ratio is reported as infinite

/// u_opt / u_mech, infinite when the strain energy is below kStrainFloor.
double energy_ratio(const ModeSolution& mode);

/// Lowest mode with the given azimuthal index under a trap that scales the
/// shape `unit_intensity` by a factor chosen so the mode sits at target_omega.
struct TunedMode {
  ModeSolution mode;
  double intensity_scale = 0.0;
};
TunedMode tune_lowest_mode(const DiskGeometry& disk, const MaterialParams& material,
                           const OpticalParams& optics, const IntensityProfile& unit_intensity,
                           const RadialGrid& grid, double target_omega);

}  // namespace optomech::plate
