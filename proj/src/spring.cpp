#include "optomech/spring.hpp"

#include <cmath>

namespace optomech::spring {

using constants::hbar;
using constants::speed_of_light;

double SpringConfig::kappa() const {
  return std::numbers::pi * speed_of_light / (finesse * cavity_length);
}

double SpringConfig::laser_omega() const { return constants::two_pi * speed_of_light / wavelength; }

double SpringConfig::coupling_rate() const {
  return coupling > 0.0 ? coupling : laser_omega() / cavity_length;
}

double SpringConfig::zero_point() const {
  return std::sqrt(hbar / (2.0 * effective_mass * natural_omega));
}

double SpringConfig::single_photon_g() const { return coupling_rate() * zero_point(); }

double SpringConfig::drive_rate() const {
  return std::sqrt(kappa() * input_power / (2.0 * hbar * laser_omega()));
}

std::complex<double> SpringConfig::amplitude() const {
  using namespace std::complex_literals;
  return 1i * drive_rate() / (0.5 * kappa() - 1i * detuning);
}

double SpringConfig::coupling_rate_enhanced() const {
  return single_photon_g() * std::abs(amplitude());
}

void SpringConfig::validate() const {
  if (!(cavity_length > 0.0)) throw InvalidInput("cavity_length must be positive");
  if (!(finesse > 0.0)) throw InvalidInput("finesse must be positive");
  if (!(wavelength > 0.0)) throw InvalidInput("wavelength must be positive");
  if (!(input_power >= 0.0)) throw InvalidInput("input_power must be nonnegative");
  if (!(effective_mass > 0.0)) throw InvalidInput("effective_mass must be positive");
  if (!(natural_omega > 0.0)) throw InvalidInput("natural_omega must be positive");
  if (coupling < 0.0) throw InvalidInput("coupling must be nonnegative");
}

std::complex<double> inverse_susceptibility(double omega, const SpringConfig& cfg) {
  cfg.validate();
  using namespace std::complex_literals;
  const double wm = cfg.natural_omega;
  const double d = cfg.detuning;
  const double om = cfg.coupling_rate_enhanced();
  const std::complex<double> q = cfg.kappa() - 2.0i * omega;
  return wm * wm - omega * omega + 16.0 * wm * d * om * om / (4.0 * d * d + q * q);
}

namespace {

double lorentz(double kappa, double x) { return 1.0 / (0.25 * kappa * kappa + x * x); }

}  // namespace

EffectiveResponse effective_frequency_and_damping(const SpringConfig& cfg) {
  cfg.validate();
  const double wm = cfg.natural_omega;
  const double d = cfg.detuning;
  const double k = cfg.kappa();
  const double om = cfg.coupling_rate_enhanced();

  EffectiveResponse out;
  const double dominant = d > 0.0 ? 2.0 * om * std::sqrt(wm / d) : 0.0;
  if (dominant > wm) {
    out.omega_eff = dominant;
    out.spring_dominated = true;
  } else {
    const double shifted = wm * wm + 16.0 * wm * d * om * om / (4.0 * d * d + k * k);
    if (!(shifted > 0.0)) throw NumericalFailure("optical spring softens the mode below zero", shifted);
    out.omega_eff = std::sqrt(shifted);
  }
  const double w = out.omega_eff;
  out.gamma_eff = om * om * k * (wm / w) * (lorentz(k, d + w) - lorentz(k, d - w));
  return out;
}

double decoherence_rate(const SpringConfig& cfg) {
  const double w = effective_frequency_and_damping(cfg).omega_eff;
  const double k = cfg.kappa();
  const double d = cfg.detuning;
  const double om = cfg.coupling_rate_enhanced();
  return om * om * k * (cfg.natural_omega / w) * (lorentz(k, d + w) + lorentz(k, d - w));
}

DecoherenceRatio decoherence_ratio(const SpringConfig& cfg) {
  const double w = effective_frequency_and_damping(cfg).omega_eff;
  const double gd = decoherence_rate(cfg);
  DecoherenceRatio out;
  out.exact = gd > 0.0 ? w / gd : kInfinity;
  out.asymptote = 2.0 * std::abs(cfg.detuning) / cfg.kappa();
  out.n_osc = out.exact / constants::two_pi;
  return out;
}

PowerRequirement required_input_power(double target_n_osc, double target_omega_eff,
                                      const SpringConfig& tmpl, double spot_radius,
                                      const MaterialParams& material) {
  if (!(target_n_osc > 0.0)) throw InvalidInput("target N_osc must be positive");
  if (!(target_omega_eff > 0.0)) throw InvalidInput("target omega_eff must be positive");
  if (!(spot_radius > 0.0)) throw InvalidInput("spot radius must be positive");
  SpringConfig cfg = tmpl;
  cfg.input_power = 0.0;
  cfg.detuning = 0.0;
  cfg.validate();
  if (target_omega_eff <= cfg.natural_omega)
    throw InvalidInput("infeasible: target omega_eff does not exceed the bare frequency");

  const double k = cfg.kappa();
  const double d = std::numbers::pi * k * target_n_osc;
  const double wp = cfg.coupling_rate();
  PowerRequirement out;
  out.detuning = d;
  out.input_power = target_omega_eff * target_omega_eff * cfg.effective_mass * d *
                    cfg.laser_omega() * (0.25 * k * k + d * d) / (wp * wp * k);
  out.intensity = out.input_power / (std::numbers::pi * spot_radius * spot_radius);
  OpticalParams optics;
  optics.wavelength = cfg.wavelength;
  out.static_intensity = intensity_for_trap_frequency(material, optics, target_omega_eff);
  return out;
}

}  // namespace optomech::spring
