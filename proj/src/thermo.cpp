#include "optomech/thermo.hpp"

#include <cmath>
#include <numbers>

namespace optomech::thermo {

double thermoelastic_work(const plate::ModeSolution& mode, const DiskGeometry& disk,
                          const MaterialParams& material, const BathParams& bath) {
  material.validate();
  bath.validate();
  const double curvature = plate::curvature_integral(mode, disk, 5);
  const double e = material.youngs_modulus;
  const double a = material.thermal_expansion_vol;
  const double one_minus = 1.0 - material.poisson_ratio;
  const double pre = std::numbers::pi * mode.omega * a * a * e * e * bath.temperature /
                     (1080.0 * material.thermal_conductivity * one_minus * one_minus);
  return pre * curvature;
}

double qf_product_limit(const MaterialParams& material, double thickness, const BathParams& bath,
                        double energy_ratio) {
  if (!(thickness > 0.0)) throw InvalidInput("thickness must be positive");
  if (energy_ratio < 0.0) throw InvalidInput("energy ratio must be nonnegative");
  if (std::isinf(energy_ratio)) return kInfinity;
  const double sigma = material.poisson_ratio;
  const double a = material.thermal_expansion_vol;
  const double base = 45.0 * material.thermal_conductivity /
                      (std::numbers::pi * material.youngs_modulus * thickness * thickness *
                       bath.temperature * a * a) *
                      (1.0 - sigma) / (1.0 + sigma);
  return base * (1.0 + energy_ratio);
}

double n_osc_th(double qf_product, const BathParams& bath) {
  if (qf_product < 0.0) throw InvalidInput("Q f product must be nonnegative");
  return qf_product * constants::planck /
         (constants::two_pi * constants::boltzmann * bath.temperature);
}

double ground_state_threshold(const BathParams& bath) {
  return constants::boltzmann * bath.temperature / constants::planck;
}

double q_thermoelastic(const plate::ModeSolution& mode, const DiskGeometry& disk,
                       const MaterialParams& material, const BathParams& bath) {
  const double dw = thermoelastic_work(mode, disk, material, bath);
  if (!(dw > 0.0)) return kInfinity;
  return constants::two_pi * (mode.u_opt + mode.u_mech) / dw;
}

double diffusion_frequency(const MaterialParams& material, double thickness) {
  return material.thermal_conductivity / (material.heat_capacity_vol * thickness * thickness);
}

ThermoResult analyze(const plate::ModeSolution& mode, const DiskGeometry& disk,
                     const MaterialParams& material, const BathParams& bath) {
  ThermoResult out;
  out.delta_w = thermoelastic_work(mode, disk, material, bath);
  out.q_factor = out.delta_w > 0.0 ? constants::two_pi * (mode.u_opt + mode.u_mech) / out.delta_w
                                   : kInfinity;
  out.qf_product = out.q_factor * rad_to_hz(mode.omega);
  out.n_osc_th = std::isinf(out.qf_product) ? kInfinity : n_osc_th(out.qf_product, bath);
  out.diffusion_frequency = diffusion_frequency(material, disk.thickness.max_thickness());
  return out;
}

}  // namespace optomech::thermo
