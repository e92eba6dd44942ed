#include "optomech/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "optomech/thermo.hpp"

namespace optomech::cavity {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

Eigen::VectorXcd mirror_phases(const hankel::HankelGrid& grid, const CavitySetup& s) {
  const double k = 2.0 * kPi / s.wavelength;
  const double amp = std::sqrt(s.reflectance);
  const double rc = s.mirror_roc;
  return grid.r().unaryExpr([&](double r) -> cd {
    if (r > s.mirror_radius) return 0.0;
    return std::polar(amp, -2.0 * k * (rc - std::sqrt(rc * rc - r * r)));
  });
}

}  // namespace

void CavitySetup::validate() const {
  if (!(length > 0.0)) throw InvalidInput("cavity length must be positive");
  if (!(mirror_roc > 0.0)) throw InvalidInput("mirror radius of curvature must be positive");
  if (!(reflectance > 0.0 && reflectance <= 1.0))
    throw InvalidInput("mirror reflectance must lie in (0, 1]");
  if (!(mirror_radius > 0.0)) throw InvalidInput("mirror aperture must be positive");
  if (mirror_radius > mirror_roc)
    throw InvalidInput("mirror aperture exceeds its radius of curvature");
  if (!(wavelength > 0.0)) throw InvalidInput("wavelength must be positive");
  if (n_points < 8) throw InvalidInput("cavity grid needs at least 8 points");
  if (grid_aperture() < mirror_radius)
    throw ConfigError("Hankel grid aperture is smaller than the mirror aperture");
  material.validate();
  if (membrane) membrane->validate();
}

double empty_cavity_waist(const CavitySetup& setup) {
  const double l = setup.length;
  const double rc = setup.mirror_roc;
  if (!(l < 2.0 * rc)) throw InvalidInput("cavity is not stable: L >= 2 R_c");
  return std::sqrt(setup.wavelength / kPi * std::sqrt(l * (2.0 * rc - l)) / 2.0);
}

FieldProfile mirror_reflect(const FieldProfile& field, const CavitySetup& setup) {
  setup.validate();
  if (field.domain != hankel::Domain::Space)
    throw InvalidInput("mirror_reflect expects a real-space field");
  if (field.grid->aperture() < setup.mirror_radius)
    throw ConfigError("Hankel grid aperture is smaller than the mirror aperture");
  FieldProfile out = field;
  out.values = field.values.cwiseProduct(mirror_phases(*field.grid, setup));
  return out;
}

SheetAmplitudes slab_amplitudes(double thickness, const MaterialParams& material,
                                double wavelength) {
  if (thickness < 0.0) throw InvalidInput("thickness must be nonnegative");
  const double n = std::sqrt(material.dielectric_constant);
  const double rs = (1.0 - n) / (1.0 + n);
  const double phi = n * 2.0 * kPi / wavelength * thickness;
  const cd e2 = std::polar(1.0, 2.0 * phi);
  const cd den = 1.0 - rs * rs * e2;
  // Both amplitudes referred to the sheet mid-plane.
  const cd shift = std::polar(1.0, -2.0 * kPi / wavelength * thickness);
  return {shift * rs * (1.0 - e2) / den, shift * (1.0 - rs * rs) * std::polar(1.0, phi) / den};
}

std::pair<FieldProfile, FieldProfile> sheet_scatter(const FieldProfile& field,
                                                    const DiskGeometry& disk,
                                                    const MaterialParams& material) {
  disk.validate();
  if (field.domain != hankel::Domain::Space)
    throw InvalidInput("sheet_scatter expects a real-space field");
  FieldProfile refl = field, trans = field;
  const Eigen::VectorXd& r = field.grid->r();
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double d = r[i] <= disk.radius ? disk.thickness.at(r[i], disk.radius) : 0.0;
    const SheetAmplitudes a = slab_amplitudes(d, material, field.wavelength);
    refl.values[i] = a.r * field.values[i];
    trans.values[i] = a.t * field.values[i];
  }
  return {refl, trans};
}

CavityOperator::CavityOperator(const CavitySetup& setup) : setup_(setup) {
  setup_.validate();
  empty_cavity_waist(setup_);
  grid_ = hankel::HankelGrid::make(setup_.n_points, setup_.grid_aperture());
  const Eigen::MatrixXcd t = grid_->transform().cast<cd>();
  const Eigen::VectorXcd half = hankel::propagation_phases(*grid_, setup_.wavelength,
                                                          0.5 * setup_.length);
  const Eigen::MatrixXcd q = t * (half.asDiagonal() * t);
  p_ = q * (mirror_phases(*grid_, setup_).asDiagonal() * q);
}

Eigen::VectorXcd CavityOperator::sheet_sum(const std::optional<DiskGeometry>& membrane) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Ones(grid_->size());
  if (!membrane) return out;
  membrane->validate();
  const Eigen::VectorXd& r = grid_->r();
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (r[i] > membrane->radius) break;
    const SheetAmplitudes a =
        slab_amplitudes(membrane->thickness.at(r[i], membrane->radius), setup_.material,
                        setup_.wavelength);
    out[i] = a.r + a.t;
  }
  return out;
}

CavityModeResult CavityOperator::solve(const std::optional<DiskGeometry>& membrane,
                                       const FieldProfile& trial,
                                       const SolverOptions& options) const {
  if (trial.grid.get() != grid_.get() && (trial.grid->size() != grid_->size() ||
                                          trial.grid->aperture() != grid_->aperture()))
    throw InvalidInput("trial field is not on the cavity grid");
  if (options.max_iterations < 1 || options.comb_length < 1 || !(options.tolerance > 0.0))
    throw InvalidInput("invalid cavity solver options");
  const Eigen::VectorXcd sum = sheet_sum(membrane);
  auto apply = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    return p_ * sum.cwiseProduct(v);
  };

  Eigen::VectorXcd x = grid_->to_scaled(trial.values);
  const double n0 = x.norm();
  if (!(n0 > 0.0)) throw InvalidInput("trial field is zero");
  x /= n0;

  // Phase-locked power iteration: the filter sum_j (A / e^{i phi})^j passes the
  // eigenvector whose eigenvalue phase is phi and attenuates transverse modes
  // that differ only in Gouy phase.
  cd lambda = 0.0, previous = 0.0;
  double residual = 0.0, last_residual = 0.0, ratio_acc = 0.0;
  int ratio_count = 0;
  bool converged = false;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const Eigen::VectorXcd ax = apply(x);
    lambda = x.dot(ax);
    residual = (ax - lambda * x).norm();
    if (it > 0 && last_residual > 0.0) {
      ratio_acc = 0.8 * ratio_acc + 0.2 * (residual / last_residual);
      ++ratio_count;
    }
    last_residual = residual;
    if (it > 0 && std::abs(lambda - previous) < options.tolerance && residual < 1e-4) {
      converged = true;
      break;
    }
    previous = lambda;
    const double mag = std::abs(lambda);
    if (!(mag > 1e-300)) throw NumericalFailure("cavity field decayed to zero", residual);
    const cd unlock = std::conj(lambda) / mag;
    Eigen::VectorXcd v = unlock * ax;
    Eigen::VectorXcd y = x + v;
    for (int j = 2; j < options.comb_length; ++j) {
      v = unlock * apply(v);
      y += v;
    }
    const double ny = y.norm();
    if (!(ny > 0.0)) throw NumericalFailure("cavity iteration collapsed", residual);
    x = y / ny;
  }
  if (!converged)
    throw NumericalFailure("cavity power iteration did not converge", residual);

  CavityModeResult out;
  out.eigenvalue = lambda;
  out.iterations = it + 1;
  out.residual = residual;
  out.degenerate = ratio_count >= 10 && ratio_acc > 0.99;

  const double c = constants::speed_of_light;
  const double l = setup_.length;
  out.resonance_offset = -std::arg(lambda) * c / l;
  const double m2 = std::norm(lambda);
  out.round_trip_loss = std::clamp(1.0 - m2 * m2, 0.0, 1.0);
  out.kappa = out.round_trip_loss * c / (2.0 * l);
  out.finesse = out.kappa > 0.0 ? kPi * c / (out.kappa * l) : kInfinity;

  // Fix the global phase so s is real and positive where it peaks.
  Eigen::VectorXcd s = grid_->from_scaled(x);
  Eigen::Index peak = 0;
  s.cwiseAbs2().maxCoeff(&peak);
  s *= std::conj(s[peak]) / std::abs(s[peak]);
  out.field.grid = grid_;
  out.field.values = s;
  out.field.wavelength = setup_.wavelength;
  out.i_max_radius = grid_->r()[peak];
  out.i_max_value = std::norm(s[peak]);
  out.waist = hankel::second_moment_waist(out.field);
  out.mode_volume_gaussian = kPi * out.waist * out.waist * l / 4.0;

  // Mode volume from the outgoing half-cavity wave sampled across (0, L/2);
  // the counter-propagating partner doubles the fringe-averaged density.
  FieldProfile a = out.field;
  a.values = 0.5 * sum.cwiseProduct(s);
  double max_i = a.values.cwiseAbs2().maxCoeff();
  double acc = 0.0;
  const int planes = std::max(1, options.volume_planes);
  for (int j = 0; j < planes; ++j) {
    const double z = (j + 0.5) * 0.5 * l / planes;
    const FieldProfile az = hankel::propagate(a, z);
    max_i = std::max(max_i, az.values.cwiseAbs2().maxCoeff());
    acc += az.power();
  }
  out.mode_volume = 0.5 * l * (acc / planes) / max_i;
  return out;
}

CavityModeResult solve_cavity_mode(const CavitySetup& setup, const FieldProfile& trial,
                                   const SolverOptions& options) {
  CavityOperator op(setup);
  FieldProfile t = trial;
  if (t.grid->size() != op.grid()->size() || t.grid->aperture() != op.grid()->aperture())
    throw InvalidInput("trial field is not on the cavity grid");
  return op.solve(setup.membrane, t, options);
}

FieldProfile default_trial(const CavityOperator& op) {
  return hankel::gaussian_field(op.grid(), empty_cavity_waist(op.setup()),
                                op.setup().wavelength);
}

IntensityProfile membrane_intensity_shape(const CavityModeResult& result) {
  const Eigen::VectorXd i = result.field.values.cwiseAbs2();
  const double peak = i.maxCoeff();
  if (!(peak > 0.0)) throw InvalidInput("cavity field is zero");
  std::vector<double> radii(i.size()), values(i.size());
  for (Eigen::Index q = 0; q < i.size(); ++q) {
    radii[q] = result.field.grid->r()[q];
    values[q] = i[q] / peak;
  }
  return IntensityProfile::numeric(std::move(radii), std::move(values));
}

RecoilResult recoil_n_osc(const CavityModeResult& result, const DiskGeometry& disk,
                          const MaterialParams& material, double wavelength, double omega_m,
                          double i_max) {
  disk.validate();
  if (!(result.kappa > 0.0)) throw InvalidInput("cavity linewidth must be positive");
  if (!(omega_m > 0.0)) throw InvalidInput("mechanical frequency must be positive");
  if (!(i_max > 0.0)) throw InvalidInput("peak intensity must be positive");
  if (!(result.mode_volume > 0.0)) throw InvalidInput("mode volume must be positive");
  const double c = constants::speed_of_light;
  const double k = 2.0 * kPi / wavelength;
  const double w0 = c * k;
  const double v = disk.volume();
  const double mass = disk.mass(material);

  RecoilResult out;
  out.i_max = i_max;
  out.n_osc = (1.0 / (2.0 * kPi)) * (v / result.mode_volume) * (w0 / result.kappa) *
              (omega_m * omega_m * material.density * c / (k * k * i_max));

  const double hbar = constants::hbar;
  out.cavity_energy = 2.0 * i_max * result.mode_volume / c;
  out.scattering_rate = result.kappa * out.cavity_energy / (hbar * w0);
  const double heating = (hbar * k) * (hbar * k) * out.scattering_rate / (2.0 * mass);
  const double jumps = heating / (hbar * omega_m);
  out.n_osc_diffusion = omega_m / (2.0 * kPi * jumps);
  return out;
}

TrappedRecoil recoil_n_osc(const CavityModeResult& result, const DiskGeometry& disk,
                           const MaterialParams& material, double wavelength, double omega_m,
                           const plate::RadialGrid& grid) {
  OpticalParams optics;
  optics.wavelength = wavelength;
  plate::RadialGrid g = grid;
  g.m = 0;
  TrappedRecoil out;
  out.tuned = plate::tune_lowest_mode(disk, material, optics, membrane_intensity_shape(result),
                                      g, omega_m);
  out.recoil = recoil_n_osc(result, disk, material, wavelength, omega_m,
                            out.tuned.intensity_scale);
  return out;
}

double n_osc_total(double n_th, double n_sc) {
  if (!(n_th > 0.0) || !(n_sc > 0.0)) throw InvalidInput("coherence numbers must be positive");
  const double inv = (std::isinf(n_th) ? 0.0 : 1.0 / n_th) + (std::isinf(n_sc) ? 0.0 : 1.0 / n_sc);
  return inv == 0.0 ? kInfinity : 1.0 / inv;
}

BudgetPoint coherence_budget(const CavityOperator& op, const DiskGeometry& disk, double omega_m,
                             const BathParams& bath, const SolverOptions& options,
                             const plate::RadialGrid& grid) {
  bath.validate();
  const CavitySetup& s = op.setup();
  const CavityModeResult mode = op.solve(disk, default_trial(op), options);
  const TrappedRecoil rec = recoil_n_osc(mode, disk, s.material, s.wavelength, omega_m, grid);
  const thermo::ThermoResult th = thermo::analyze(rec.tuned.mode, disk, s.material, bath);

  const double w0 = empty_cavity_waist(s);
  BudgetPoint out;
  out.radius = disk.radius;
  out.finesse = mode.finesse;
  out.n_th = th.n_osc_th;
  out.n_sc = rec.recoil.n_osc;
  out.n_tot = n_osc_total(out.n_th, out.n_sc);
  out.waist_ratio = w0 / disk.radius;
  out.scaling_estimate = (2.0 * kPi / s.wavelength) * disk.volume() * mode.finesse / (w0 * w0);
  out.i_max = rec.recoil.i_max;
  out.iterations = mode.iterations;
  out.degenerate = mode.degenerate;
  return out;
}

}  // namespace optomech::cavity
