#include "optomech/coupling.hpp"

#include <algorithm>
#include <cmath>

namespace optomech::coupling {

double coupling_ratio(const plate::ModeSolution& mode, double readout_waist,
                      const DiskGeometry& disk) {
  if (!(readout_waist > 0.0)) throw InvalidInput("readout waist must be positive");
  disk.validate();
  if (mode.m != 0) return 0.0;
  const plate::PlateBasis& b = *mode.basis;
  const Eigen::VectorXd f = b.value * mode.coefficients;
  const double w2 = readout_waist * readout_waist;
  double num = 0.0, den = 0.0;
  for (Eigen::Index q = 0; q < b.s.size(); ++q) {
    const double g = b.weight[q] * std::exp(-2.0 * b.r[q] * b.r[q] / w2);
    num += g * f[q];
    den += g;
  }
  return num / den;
}

PinningProfile pinning_profile(const plate::ModeSolution& mode, double central_radius,
                               int n_samples) {
  if (n_samples < 2) throw InvalidInput("pinning profile needs at least two samples");
  if (!(central_radius > 0.0)) throw InvalidInput("central radius must be positive");
  const double a = mode.basis->radius;
  PinningProfile out;
  for (int i = 0; i < n_samples; ++i) {
    const double r = a * i / (n_samples - 1.0);
    out.radii.push_back(r);
    out.profile.push_back(mode(r));
  }
  double centre = 0.0;
  const double r_c = std::min(central_radius, a);
  for (int i = 0; i <= 400; ++i) centre = std::max(centre, std::abs(mode(r_c * i / 400.0)));
  const double rim = std::abs(out.profile.back());
  out.rim_to_center = centre > 0.0 ? rim / centre : kInfinity;
  return out;
}

std::vector<CouplingPoint> coupling_sweep(const DiskGeometry& disk, const MaterialParams& material,
                                          const OpticalParams& optics, double waist,
                                          const std::vector<double>& target_omegas,
                                          const plate::RadialGrid& grid) {
  plate::RadialGrid g = grid;
  g.m = 0;
  const IntensityProfile unit = IntensityProfile::gaussian(1.0, waist);
  std::vector<CouplingPoint> out;
  for (double w : target_omegas) {
    const plate::TunedMode tuned = plate::tune_lowest_mode(disk, material, optics, unit, g, w);
    CouplingPoint p;
    p.omega = tuned.mode.omega;
    p.peak_intensity = tuned.intensity_scale;
    p.ratio = coupling_ratio(tuned.mode, waist, disk);
    p.rim_to_center = pinning_profile(tuned.mode, waist).rim_to_center;
    out.push_back(p);
  }
  return out;
}

}  // namespace optomech::coupling
