#include "optomech/core.hpp"

#include <algorithm>

namespace optomech {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidInput(what);
}

}  // namespace

MaterialParams MaterialParams::silicon_nitride() {
  MaterialParams m;
  m.youngs_modulus = 270e9;
  m.poisson_ratio = 0.25;
  m.density = 2700.0;
  m.dielectric_constant = 4.0;
  m.heat_capacity_vol = 2e6;
  m.thermal_conductivity = 20.0;
  m.thermal_expansion_vol = 4.8e-6;
  return m;
}

void MaterialParams::validate() const {
  require(youngs_modulus > 0.0, "youngs_modulus must be positive");
  require(poisson_ratio > 0.0 && poisson_ratio < 0.5, "poisson_ratio must lie in (0, 0.5)");
  require(density > 0.0, "density must be positive");
  require(dielectric_constant > 1.0, "dielectric_constant must exceed 1");
  require(heat_capacity_vol > 0.0, "heat_capacity_vol must be positive");
  require(thermal_conductivity > 0.0, "thermal_conductivity must be positive");
  require(thermal_expansion_vol >= 0.0, "thermal_expansion_vol must be nonnegative");
}

double ThicknessProfile::at_s(double s) const {
  if (s > 1.0) return 0.0;
  if (const auto* u = std::get_if<Uniform>(&v_)) return u->d;
  const double d0 = std::get<Apodized>(v_).d0;
  const double t = 1.0 - s;
  return d0 * t * t;
}

double ThicknessProfile::max_thickness() const {
  if (const auto* u = std::get_if<Uniform>(&v_)) return u->d;
  return std::get<Apodized>(v_).d0;
}

double ThicknessProfile::mean_thickness() const {
  if (const auto* u = std::get_if<Uniform>(&v_)) return u->d;
  return std::get<Apodized>(v_).d0 / 3.0;
}

void DiskGeometry::validate() const {
  require(radius > 0.0, "radius must be positive");
  require(thickness.max_thickness() > 0.0, "thickness must be positive");
}

double DiskGeometry::volume() const {
  return std::numbers::pi * radius * radius * thickness.mean_thickness();
}

void TetherGeometry::validate() const {
  require(length > 0.0, "tether length must be positive");
  require(width > 0.0, "tether width must be positive");
}

IntensityProfile IntensityProfile::plane_wave(double i0) {
  require(i0 >= 0.0, "intensity must be nonnegative");
  return IntensityProfile(PlaneWave{i0});
}

IntensityProfile IntensityProfile::gaussian(double i0, double waist) {
  require(i0 >= 0.0, "intensity must be nonnegative");
  require(waist > 0.0, "waist must be positive");
  return IntensityProfile(Gaussian{i0, waist});
}

IntensityProfile IntensityProfile::numeric(std::vector<double> radii, std::vector<double> values) {
  require(!radii.empty() && radii.size() == values.size(),
          "numeric intensity needs matching, nonempty radius and value samples");
  require(std::is_sorted(radii.begin(), radii.end()), "numeric intensity radii must be sorted");
  require(std::all_of(values.begin(), values.end(), [](double v) { return v >= 0.0; }),
          "intensity must be nonnegative");
  return IntensityProfile(Numeric{std::move(radii), std::move(values)});
}

double IntensityProfile::operator()(double r) const {
  return std::visit(
      [r](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PlaneWave>) {
          return p.i0;
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return p.i0 * std::exp(-2.0 * r * r / (p.waist * p.waist));
        } else {
          const auto& x = p.radii;
          if (r <= x.front()) return p.values.front();
          if (r > x.back()) return 0.0;
          const auto it = std::upper_bound(x.begin(), x.end(), r);
          const auto j = static_cast<std::size_t>(it - x.begin());
          const double t = (r - x[j - 1]) / (x[j] - x[j - 1]);
          return (1.0 - t) * p.values[j - 1] + t * p.values[j];
        }
      },
      v_);
}

IntensityProfile IntensityProfile::scaled(double factor) const {
  require(factor >= 0.0, "intensity scale must be nonnegative");
  return std::visit(
      [factor](const auto& p) -> IntensityProfile {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PlaneWave>) {
          return IntensityProfile(PlaneWave{p.i0 * factor});
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return IntensityProfile(Gaussian{p.i0 * factor, p.waist});
        } else {
          Numeric n = p;
          for (double& v : n.values) v *= factor;
          return IntensityProfile(std::move(n));
        }
      },
      v_);
}

double IntensityProfile::peak() const {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Numeric>) {
          return *std::max_element(p.values.begin(), p.values.end());
        } else {
          return p.i0;
        }
      },
      v_);
}

void OpticalParams::validate() const { require(wavelength > 0.0, "wavelength must be positive"); }

void BathParams::validate() const { require(temperature > 0.0, "temperature must be positive"); }

double trap_frequency_squared(const MaterialParams& material, const OpticalParams& optics,
                              double intensity) {
  if (intensity < 0.0) throw InvalidInput("intensity must be nonnegative");
  const double k = optics.wavevector();
  return 2.0 * k * k * intensity * (material.dielectric_constant - 1.0) /
         (material.density * constants::speed_of_light);
}

double local_trap_frequency(const MaterialParams& material, const OpticalParams& optics,
                            const IntensityProfile& intensity, double r) {
  if (r < 0.0) throw InvalidInput("radius must be nonnegative");
  return std::sqrt(trap_frequency_squared(material, optics, intensity(r)));
}

double intensity_for_trap_frequency(const MaterialParams& material, const OpticalParams& optics,
                                    double omega) {
  const double k = optics.wavevector();
  return omega * omega * material.density * constants::speed_of_light /
         (2.0 * k * k * (material.dielectric_constant - 1.0));
}

}  // namespace optomech
