// Readout coupling of a trapped disk mode to a concentric Gaussian beam,
// relative to rigid centre-of-mass motion.

#pragma once

#include <vector>

#include "optomech/core.hpp"
#include "optomech/plate.hpp"

namespace optomech::coupling {

/// g / g0 = int exp(-2 r^2/w^2) f(r) dA / int exp(-2 r^2/w^2) dA over the disk,
/// for a profile normalized to max |f| = 1. Zero for m >= 1.
double coupling_ratio(const plate::ModeSolution& mode, double readout_waist,
                      const DiskGeometry& disk);

struct PinningProfile {
  std::vector<double> radii;    // m
  std::vector<double> profile;  // f(r), max |f| = 1
  double rim_to_center = 1.0;   // |f(a)| / max |f| over r < central_radius
};

PinningProfile pinning_profile(const plate::ModeSolution& mode, double central_radius,
                               int n_samples = 201);

struct CouplingPoint {
  double omega = 0.0;          // CM frequency, rad/s
  double peak_intensity = 0.0; // W/m^2
  double ratio = 0.0;          // g / g0
  double rim_to_center = 1.0;
};

/// Lowest m = 0 mode of a disk trapped by a Gaussian of the given waist, tuned to
/// each target frequency in turn; the readout beam shares the trap waist.
std::vector<CouplingPoint> coupling_sweep(const DiskGeometry& disk, const MaterialParams& material,
                                          const OpticalParams& optics, double waist,
                                          const std::vector<double>& target_omegas,
                                          const plate::RadialGrid& grid = {});

}  // namespace optomech::coupling
