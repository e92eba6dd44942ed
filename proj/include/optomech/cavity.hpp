// Fabry-Perot cavity with a dielectric disk at its centre: mirror and sheet
// operators, the dominant transverse mode including every order of
// reflection off the disk, and the recoil-heating coherence budget.
//
// With the disk midway between identical mirrors, the counter-propagating
// fields u_L, u_R arriving at the disk split into the sum s = u_L + u_R and
// the difference. The sum sector, which has an intensity antinode on the disk,
// maps onto itself under
//   s -> P (r + t) s,   P = prop(L/2) . mirror . prop(L/2),
// one application covering a single cavity length. A round trip is two
// applications, so the round-trip power loss is 1 - |lambda|^4.

#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <utility>

#include "optomech/core.hpp"
#include "optomech/hankel.hpp"
#include "optomech/plate.hpp"

namespace optomech::cavity {

using hankel::FieldProfile;

struct CavitySetup {
  double length = 1.99e-2;        // m
  double mirror_roc = 1e-2;       // m
  double reflectance = 1.0;       // power reflectance R_m
  double mirror_radius = 0.95e-3; // m, field beyond it is discarded on reflection
  double wavelength = 1e-6;       // m
  std::optional<DiskGeometry> membrane;
  MaterialParams material = MaterialParams::silicon_nitride();
  int n_points = 1024;
  double aperture = 0.0;  // Hankel grid radius; 0 selects 1.5 mirror_radius

  double grid_aperture() const { return aperture > 0.0 ? aperture : 1.5 * mirror_radius; }
  void validate() const;
};

/// Waist of the empty symmetric two-mirror resonator, (lambda/pi) sqrt(L (2 R_c - L)) / 2 = w0^2.
double empty_cavity_waist(const CavitySetup& setup);

/// sqrt(R_m) exp(-2 i k (R_c - sqrt(R_c^2 - r^2))) inside r_m, zero outside.
FieldProfile mirror_reflect(const FieldProfile& field, const CavitySetup& setup);

struct SheetAmplitudes {
  std::complex<double> r;
  std::complex<double> t;
};

/// Lossless dielectric slab at normal incidence,
///   r = r_s (1 - e^{2i phi}) / (1 - r_s^2 e^{2i phi}),  t = (1 - r_s^2) e^{i phi} / (1 - r_s^2 e^{2i phi}),
/// r_s = (1 - n)/(1 + n), phi = n k d, n = sqrt(eps), both multiplied by e^{-i k d}
/// so the phase is referred to the mid-plane of a sheet of zero extent.
SheetAmplitudes slab_amplitudes(double thickness, const MaterialParams& material,
                                double wavelength);

/// Reflected and transmitted fronts, using the local thickness d(r) at each sample.
std::pair<FieldProfile, FieldProfile> sheet_scatter(const FieldProfile& field,
                                                    const DiskGeometry& disk,
                                                    const MaterialParams& material);

struct SolverOptions {
  int max_iterations = 2000;
  double tolerance = 1e-8;  // eigenvalue change between iterations
  int comb_length = 16;     // terms of the phase-locked filter
  int volume_planes = 64;
};

struct CavityModeResult {
  std::complex<double> eigenvalue;  // single-length sector eigenvalue
  double resonance_offset = 0.0;    // rad/s, shift from the drive frequency to resonance
  FieldProfile field;               // s at the disk plane
  double round_trip_loss = 0.0;
  double kappa = 0.0;               // rad/s, energy decay rate
  double finesse = 0.0;             // pi c / (kappa L)
  double i_max_radius = 0.0;        // m
  double i_max_value = 0.0;         // max |s|^2 on the disk plane, field units
  double mode_volume = 0.0;         // m^3
  double mode_volume_gaussian = 0.0;// pi w0^2 L / 4 with w0 from the disk-plane field
  double waist = 0.0;               // second-moment waist at the disk plane
  int iterations = 0;
  double residual = 0.0;            // |A x - lambda x| for unit x
  bool degenerate = false;          // slow convergence suggests a competing mode
};

/// Dense single-length operator P for a setup, reused across membranes.
class CavityOperator {
 public:
  explicit CavityOperator(const CavitySetup& setup);

  const CavitySetup& setup() const { return setup_; }
  std::shared_ptr<const hankel::HankelGrid> grid() const { return grid_; }

  /// (r + t) at the grid radii for the setup's membrane, or ones if there is none.
  Eigen::VectorXcd sheet_sum(const std::optional<DiskGeometry>& membrane) const;

  CavityModeResult solve(const std::optional<DiskGeometry>& membrane, const FieldProfile& trial,
                         const SolverOptions& options = {}) const;

 private:
  CavitySetup setup_;
  std::shared_ptr<const hankel::HankelGrid> grid_;
  Eigen::MatrixXcd p_;  // scaled coordinates
};

CavityModeResult solve_cavity_mode(const CavitySetup& setup, const FieldProfile& trial,
                                   const SolverOptions& options = {});

/// Gaussian trial at the empty-cavity waist on the setup's grid.
FieldProfile default_trial(const CavityOperator& op);

/// |s|^2 at the disk plane, normalized to unit peak, as a trap intensity shape.
IntensityProfile membrane_intensity_shape(const CavityModeResult& result);

struct RecoilResult {
  double n_osc = 0.0;           // from the closed expression
  double n_osc_diffusion = 0.0; // from momentum diffusion converted to a jump rate
  double i_max = 0.0;           // W/m^2
  double scattering_rate = 0.0; // photons/s
  double cavity_energy = 0.0;   // J
};

/// N = (1/2pi)(V/V_c)(omega0/kappa)(omega_m^2 rho c / (k^2 I_max)) and the same
/// number from d<p^2>/dt = (hbar k)^2 R_sc with R_sc = kappa U / (hbar omega0).
RecoilResult recoil_n_osc(const CavityModeResult& result, const DiskGeometry& disk,
                          const MaterialParams& material, double wavelength, double omega_m,
                          double i_max);

/// Tunes the CM mode of the disk in the cavity intensity shape to omega_m and
/// evaluates the recoil budget at the resulting peak intensity.
struct TrappedRecoil {
  plate::TunedMode tuned;
  RecoilResult recoil;
};
TrappedRecoil recoil_n_osc(const CavityModeResult& result, const DiskGeometry& disk,
                           const MaterialParams& material, double wavelength, double omega_m,
                           const plate::RadialGrid& grid = {});

/// Parallel sum (1/n_th + 1/n_sc)^{-1}; infinite inputs drop out.
double n_osc_total(double n_th, double n_sc);

struct BudgetPoint {
  double radius = 0.0;     // m
  double finesse = 0.0;
  double n_th = 0.0;
  double n_sc = 0.0;
  double n_tot = 0.0;
  double waist_ratio = 0.0;     // w0 / a, empty-cavity w0
  double scaling_estimate = 0.0;// k V F / w0^2
  double i_max = 0.0;           // W/m^2
  int iterations = 0;
  bool degenerate = false;
};

/// Coherence budget of one disk in the cavity, CM tuned to omega_m.
BudgetPoint coherence_budget(const CavityOperator& op, const DiskGeometry& disk,
                             double omega_m, const BathParams& bath,
                             const SolverOptions& options = {},
                             const plate::RadialGrid& grid = {});

}  // namespace optomech::cavity
