// Thermoelastic dissipation of plate modes and the coherence limits it sets.

#pragma once

#include "optomech/core.hpp"
#include "optomech/plate.hpp"

namespace optomech::thermo {

struct ThermoResult {
  double delta_w = 0.0;     // J dissipated per cycle at unit amplitude
  double q_factor = 0.0;
  double qf_product = 0.0;  // Hz
  double n_osc_th = 0.0;
  double diffusion_frequency = 0.0;  // kappa_th / (c_V d^2), rad/s
};

/// Work per cycle driving the transverse heat flow of one eigenmode,
///   dW = pi omega alpha^2 E^2 T / (1080 kappa (1 - sigma)^2) * integral d(r)^5 (lap zeta)^2 dA.
/// Local thickness enters to the fifth power for non-uniform disks.
double thermoelastic_work(const plate::ModeSolution& mode, const DiskGeometry& disk,
                          const MaterialParams& material, const BathParams& bath);

/// Closed-form Q f limit, linear in (1 + U_opt/U_mech). Infinite ratio gives infinity.
double qf_product_limit(const MaterialParams& material, double thickness, const BathParams& bath,
                        double energy_ratio);

/// Coherent oscillations before one thermal phonon is exchanged, Q f h / (2 pi k_B T).
double n_osc_th(double qf_product, const BathParams& bath);

/// k_B T / h, the Q f threshold for ground-state cooling.
double ground_state_threshold(const BathParams& bath);

/// Q = 2 pi (U_opt + U_mech) / dW, infinite when dW = 0.
double q_thermoelastic(const plate::ModeSolution& mode, const DiskGeometry& disk,
                       const MaterialParams& material, const BathParams& bath);

/// All of the above for one mode, using the direct dW route.
ThermoResult analyze(const plate::ModeSolution& mode, const DiskGeometry& disk,
                     const MaterialParams& material, const BathParams& bath);

/// Thermal relaxation rate across the thickness; the closed form assumes the
/// mode frequency sits well below it.
double diffusion_frequency(const MaterialParams& material, double thickness);

}  // namespace optomech::thermo
