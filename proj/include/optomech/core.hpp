// Shared physical descriptions for the optically trapped membrane solvers.
//
// Every quantity is carried in SI base units. Angular frequencies are rad/s;
// conversion to Hz happens only at the CLI boundary.

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace optomech {

namespace constants {
inline constexpr double speed_of_light = 299792458.0;    // m/s
inline constexpr double planck = 6.62607015e-34;         // J s
inline constexpr double hbar = planck / (2.0 * std::numbers::pi);
inline constexpr double boltzmann = 1.380649e-23;        // J/K
inline constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace constants

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Error hierarchy. The C API maps each class onto a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  NumericalFailure(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        detail_(what),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }
  /// Message without the residual suffix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  double residual_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct MaterialParams {
  double youngs_modulus = 0.0;        // Pa
  double poisson_ratio = 0.0;
  double density = 0.0;               // kg/m^3
  double dielectric_constant = 0.0;
  double heat_capacity_vol = 0.0;     // J/(m^3 K)
  double thermal_conductivity = 0.0;  // W/(m K)
  double thermal_expansion_vol = 0.0; // 1/K, volumetric

  /// Stoichiometric silicon nitride.
  static MaterialParams silicon_nitride();

  /// Throws InvalidInput naming the first offending field.
  void validate() const;

  bool operator==(const MaterialParams&) const = default;
};

class ThicknessProfile {
 public:
  struct Uniform {
    double d;
  };
  /// d(r) = d0 (1 - (r/a)^2)^2, vanishing at the rim.
  struct Apodized {
    double d0;
  };

  static ThicknessProfile uniform(double d) { return ThicknessProfile(Uniform{d}); }
  static ThicknessProfile apodized(double d0) { return ThicknessProfile(Apodized{d0}); }

  /// Thickness at normalized radius s = (r/a)^2, which is where the solvers evaluate it.
  double at_s(double s) const;
  double at(double r, double radius) const { return at_s((r / radius) * (r / radius)); }
  double max_thickness() const;
  bool is_apodized() const { return std::holds_alternative<Apodized>(v_); }

  /// Integral of d(r) over the disk divided by pi a^2.
  double mean_thickness() const;

 private:
  explicit ThicknessProfile(std::variant<Uniform, Apodized> v) : v_(v) {}
  std::variant<Uniform, Apodized> v_;
};

struct DiskGeometry {
  double radius = 0.0;  // m
  ThicknessProfile thickness = ThicknessProfile::uniform(0.0);

  void validate() const;
  /// Kirchhoff plate theory assumes d << a; flagged above d0/a = 0.05.
  bool thin_plate_warning() const { return thickness.max_thickness() / radius > 0.05; }
  double volume() const;
  double mass(const MaterialParams& m) const { return m.density * volume(); }
};

struct TetherGeometry {
  double length = 0.0;  // m
  double width = 0.0;   // m, square cross-section
  void validate() const;
};

/// Transverse intensity of the trapping standing wave at the membrane plane.
class IntensityProfile {
 public:
  struct PlaneWave {
    double i0;
  };
  struct Gaussian {
    double i0;
    double waist;
  };
  /// Tabulated I(r), linearly interpolated, zero beyond the last sample.
  struct Numeric {
    std::vector<double> radii;
    std::vector<double> values;
  };

  static IntensityProfile plane_wave(double i0);
  static IntensityProfile gaussian(double i0, double waist);
  static IntensityProfile numeric(std::vector<double> radii, std::vector<double> values);

  double operator()(double r) const;
  /// Same shape, every sample multiplied by factor.
  IntensityProfile scaled(double factor) const;
  double peak() const;

  bool is_plane_wave() const { return std::holds_alternative<PlaneWave>(v_); }
  bool is_zero() const { return peak() == 0.0; }
  const auto& variant() const { return v_; }

 private:
  explicit IntensityProfile(std::variant<PlaneWave, Gaussian, Numeric> v) : v_(std::move(v)) {}
  std::variant<PlaneWave, Gaussian, Numeric> v_;
};

struct OpticalParams {
  double wavelength = 1e-6;  // m
  double wavevector() const { return constants::two_pi / wavelength; }
  double angular_frequency() const { return constants::speed_of_light * wavevector(); }
  void validate() const;
};

struct BathParams {
  double temperature = 300.0;  // K
  void validate() const;
};

/// omega_opt^2 for a given local intensity; the trap stiffness per unit mass.
double trap_frequency_squared(const MaterialParams& material, const OpticalParams& optics,
                              double intensity);

/// Restoring frequency of a thin dielectric sheet at a standing-wave antinode,
/// omega_opt(r) = sqrt(2 k^2 I(r) (eps - 1) / (rho c)).
double local_trap_frequency(const MaterialParams& material, const OpticalParams& optics,
                            const IntensityProfile& intensity, double r);

/// Inverse of the trap law: the intensity giving angular trap frequency omega.
double intensity_for_trap_frequency(const MaterialParams& material, const OpticalParams& optics,
                                    double omega);

inline double hz_to_rad(double f) { return constants::two_pi * f; }
inline double rad_to_hz(double w) { return w / constants::two_pi; }

}  // namespace optomech
