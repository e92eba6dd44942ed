// Dynamic optical spring from a detuned cavity drive, after adiabatic
// elimination of the intracavity field.

#pragma once

#include <complex>

#include "optomech/core.hpp"

namespace optomech::spring {

struct SpringConfig {
  double cavity_length = 0.0;  // m
  double finesse = 0.0;
  double wavelength = 1e-6;    // m
  double detuning = 0.0;       // rad/s, positive is blue of resonance
  double input_power = 0.0;    // W
  double effective_mass = 0.0; // kg
  double natural_omega = 0.0;  // rad/s
  double coupling = 0.0;       // rad/s per m; 0 selects omega_L / L

  double kappa() const;            // pi c / (F L)
  double laser_omega() const;      // 2 pi c / lambda
  double coupling_rate() const;    // omega'
  double zero_point() const;       // sqrt(hbar / (2 m omega_m))
  double single_photon_g() const;  // omega' z_zp
  double drive_rate() const;       // Omega_L = sqrt(kappa P / (2 hbar omega_L))
  std::complex<double> amplitude() const;  // i Omega_L / (kappa/2 - i delta)
  double coupling_rate_enhanced() const;   // Omega_m = g |alpha|
  void validate() const;
};

/// chi^{-1}(omega) = omega_m^2 - omega^2 + 16 omega_m delta Omega_m^2 / (4 delta^2 + (kappa - 2 i omega)^2).
std::complex<double> inverse_susceptibility(double omega, const SpringConfig& cfg);

struct EffectiveResponse {
  double omega_eff = 0.0;  // rad/s
  double gamma_eff = 0.0;  // rad/s, negative means anti-damping
  bool spring_dominated = false;
};

/// omega_eff = 2 Omega_m sqrt(omega_m / delta) when that exceeds omega_m,
/// otherwise the static shift sqrt(omega_m^2 + 16 omega_m delta Omega_m^2 / (4 delta^2 + kappa^2)).
EffectiveResponse effective_frequency_and_damping(const SpringConfig& cfg);

struct DecoherenceRatio {
  double exact = 0.0;       // omega_eff / Gamma_d
  double asymptote = 0.0;   // 2 delta / kappa
  double n_osc = 0.0;       // exact / (2 pi)
};

/// Gamma_d = Omega_m^2 kappa (omega_m/omega_eff) [L(delta + omega_eff) + L(delta - omega_eff)]
/// with L(x) = 1 / ((kappa/2)^2 + x^2), the Stokes plus anti-Stokes rates.
DecoherenceRatio decoherence_ratio(const SpringConfig& cfg);

/// Raman decoherence rate Gamma_d in rad/s.
double decoherence_rate(const SpringConfig& cfg);

struct PowerRequirement {
  double input_power = 0.0;  // W
  double detuning = 0.0;     // rad/s
  double intensity = 0.0;    // W/m^2 over the area pi spot_radius^2
  double static_intensity = 0.0;  // W/m^2, static trap reaching target_omega_eff
};

/// Input power for N^(osc) = target_n_osc at omega_eff = target_omega_eff with
/// delta = pi kappa N^(osc). input_power and detuning of the template are ignored.
/// Throws InvalidInput when the target frequency does not exceed natural_omega.
PowerRequirement required_input_power(double target_n_osc, double target_omega_eff,
                                      const SpringConfig& tmpl, double spot_radius,
                                      const MaterialParams& material);

}  // namespace optomech::spring
