#include "optomech/plate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "detail/quadrature.hpp"

namespace optomech::plate {

namespace {

constexpr int kProfileSamples = 513;

// Basis column k at normalized radius rho, written into the five derivative
// combinations. Ps, Pss are derivatives in s = rho^2 (x = 2s - 1).
struct Combos {
  double f, lap, second, bend, twist;
};

Combos combos(int m, double rho, double P, double Ps, double Pss) {
  const double s = rho * rho;
  const double rm = std::pow(rho, m);
  // rho^(m-2) only ever appears multiplied by m(m-1) or (m-1), zero for m < 2
  // except in `twist` at m = 0 where its angular weight vanishes.
  const double rm2 = m >= 2 ? std::pow(rho, m - 2) : 0.0;
  Combos c{};
  c.f = rm * P;
  c.lap = rm * ((4.0 * m + 4.0) * Ps + 4.0 * s * Pss);
  c.second = m * (m - 1.0) * rm2 * P + rm * ((4.0 * m + 2.0) * Ps + 4.0 * s * Pss);
  c.bend = m * (1.0 - m) * rm2 * P + 2.0 * rm * Ps;
  c.twist = (m >= 2 ? (m - 1.0) * rm2 * P : 0.0) + 2.0 * rm * Ps;
  return c;
}

void check_same_grid(const ModeSolution& mode, const DiskGeometry& disk) {
  if (!mode.basis) throw InvalidInput("mode carries no basis");
  if (std::abs(mode.basis->radius - disk.radius) > 1e-12 * disk.radius)
    throw InvalidInput("mode grid does not match disk radius");
}

// Quadratic form Q_ij = sum_q w_q h_q A_qi A_qj.
Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& a, const Eigen::VectorXd& wh) {
  return a.transpose() * wh.asDiagonal() * a;
}

Eigen::MatrixXd stiffness_form(const PlateBasis& b, const DiskGeometry& disk,
                               const MaterialParams& mat, bool bulk_only) {
  const double sigma = mat.poisson_ratio;
  const int m = b.grid.m;
  const Eigen::Index nq = b.s.size();
  Eigen::VectorXd g(nq);
  for (Eigen::Index q = 0; q < nq; ++q) g[q] = std::pow(disk.thickness.at_s(b.s[q]), 3);
  const Eigen::VectorXd wg = b.weight.cwiseProduct(g);
  const double cw = b.cos_weight();
  Eigen::MatrixXd k = cw * weighted_gram(b.laplacian, wg);
  if (!bulk_only) {
    const Eigen::MatrixXd cross = b.second.transpose() * wg.asDiagonal() * b.bend;
    k -= (1.0 - sigma) * cw * (cross + cross.transpose());
    if (m > 0) k += 2.0 * (1.0 - sigma) * b.sin_weight() * m * m * weighted_gram(b.twist, wg);
  }
  const double scale =
      mat.youngs_modulus / (12.0 * (1.0 - sigma * sigma) * b.radius * b.radius);
  return scale * k;
}

Eigen::MatrixXd mass_form(const PlateBasis& b, const DiskGeometry& disk, const MaterialParams& mat,
                          const std::vector<double>* omega_sq) {
  const Eigen::Index nq = b.s.size();
  Eigen::VectorXd h(nq);
  for (Eigen::Index q = 0; q < nq; ++q) {
    h[q] = disk.thickness.at_s(b.s[q]);
    if (omega_sq) h[q] *= (*omega_sq)[q];
  }
  const double scale = mat.density * b.cos_weight() * b.radius * b.radius;
  return scale * weighted_gram(b.value, b.weight.cwiseProduct(h));
}

std::vector<double> trap_samples(const PlateBasis& b, const MaterialParams& mat,
                                 const OpticalParams& optics, const IntensityProfile& intensity) {
  std::vector<double> out(b.r.size());
  for (Eigen::Index q = 0; q < b.r.size(); ++q)
    out[q] = trap_frequency_squared(mat, optics, intensity(b.r[q]));
  return out;
}

int count_sign_changes(const std::vector<double>& f) {
  int changes = 0;
  int last = 0;
  for (double v : f) {
    if (std::abs(v) < 1e-8) continue;
    const int sgn = v > 0 ? 1 : -1;
    if (last != 0 && sgn != last) ++changes;
    last = sgn;
  }
  return changes;
}

ModeSolution make_mode(const PlateOperator& op, const Eigen::VectorXd& x, double lambda) {
  const PlateBasis& b = *op.basis;
  ModeSolution mode;
  mode.m = b.grid.m;
  mode.basis = op.basis;
  mode.omega = std::sqrt(std::max(lambda, 0.0));

  // Normalize max |f| = 1 with the extremal value positive.
  std::vector<double> dense(kProfileSamples);
  double peak = 0.0, peak_signed = 1.0;
  for (int i = 0; i < kProfileSamples; ++i) {
    const double r = b.radius * i / (kProfileSamples - 1.0);
    dense[i] = b.evaluate(x, r);
    if (std::abs(dense[i]) > peak) {
      peak = std::abs(dense[i]);
      peak_signed = dense[i];
    }
  }
  for (Eigen::Index q = 0; q < b.r.size(); ++q) {
    const double v = b.evaluate(x, b.r[q]);
    if (std::abs(v) > peak) {
      peak = std::abs(v);
      peak_signed = v;
    }
  }
  mode.coefficients = x / peak_signed;
  for (double& v : dense) v /= peak_signed;
  mode.n = count_sign_changes(dense);

  mode.radii.reserve(b.r.size() + 2);
  mode.radii.push_back(0.0);
  for (Eigen::Index q = 0; q < b.r.size(); ++q) mode.radii.push_back(b.r[q]);
  mode.radii.push_back(b.radius);
  for (double r : mode.radii) mode.profile.push_back(b.evaluate(mode.coefficients, r));

  mode.u_mech = std::max(0.0, 0.5 * mode.coefficients.dot(op.stiffness * mode.coefficients));
  mode.u_opt = std::max(0.0, 0.5 * mode.coefficients.dot(op.trap * mode.coefficients));
  return mode;
}

}  // namespace

void RadialGrid::validate() const {
  if (m < 0) throw InvalidInput("azimuthal index m must be nonnegative");
  if (n_points < 8) throw InvalidInput("grid n_points must be at least 8");
  if (basis_size() < 2 || basis_size() > n_points)
    throw InvalidInput("grid n_basis must lie in [2, n_points]");
}

std::shared_ptr<const PlateBasis> PlateBasis::build(const RadialGrid& grid, double radius) {
  grid.validate();
  if (radius <= 0.0) throw InvalidInput("radius must be positive");
  auto b = std::make_shared<PlateBasis>();
  b->grid = grid;
  b->radius = radius;
  const int nq = grid.n_points;
  const int nb = grid.basis_size();
  const auto rule = detail::gauss_legendre(nq, 0.0, 1.0);
  b->s = Eigen::Map<const Eigen::VectorXd>(rule.nodes.data(), nq);
  b->weight = 0.5 * Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), nq);
  b->r = radius * b->s.cwiseSqrt();
  for (auto* mat : {&b->value, &b->laplacian, &b->second, &b->bend, &b->twist})
    mat->resize(nq, nb);

  std::vector<double> p, dp, ddp;
  for (int q = 0; q < nq; ++q) {
    const double rho = std::sqrt(b->s[q]);
    detail::legendre_table(2.0 * b->s[q] - 1.0, nb, p, dp, ddp);
    for (int k = 0; k < nb; ++k) {
      const Combos c = combos(grid.m, rho, p[k], 2.0 * dp[k], 4.0 * ddp[k]);
      b->value(q, k) = c.f;
      b->laplacian(q, k) = c.lap;
      b->second(q, k) = c.second;
      b->bend(q, k) = c.bend;
      b->twist(q, k) = c.twist;
    }
  }
  // Scale columns to a unit-diagonal uniform-thickness mass form.
  b->column_scale.resize(nb);
  for (int k = 0; k < nb; ++k) {
    const double norm = std::sqrt(b->weight.dot(b->value.col(k).cwiseAbs2()));
    b->column_scale[k] = 1.0 / norm;
  }
  const auto scale = b->column_scale.asDiagonal();
  b->value = b->value * scale;
  b->laplacian = b->laplacian * scale;
  b->second = b->second * scale;
  b->bend = b->bend * scale;
  b->twist = b->twist * scale;
  return b;
}

double PlateBasis::evaluate(const Eigen::VectorXd& c, double r) const {
  const double rho = std::clamp(r / radius, 0.0, 1.0);
  const int nb = static_cast<int>(c.size());
  std::vector<double> p, dp, ddp;
  detail::legendre_table(2.0 * rho * rho - 1.0, nb, p, dp, ddp);
  const double rm = std::pow(rho, grid.m);
  double acc = 0.0;
  for (int k = 0; k < nb; ++k) acc += c[k] * column_scale[k] * p[k];
  return rm * acc;
}

double PlateBasis::cos_weight() const {
  return grid.m == 0 ? 2.0 * std::numbers::pi : std::numbers::pi;
}

double PlateBasis::sin_weight() const { return grid.m == 0 ? 0.0 : std::numbers::pi; }

PlateOperator assemble_plate_operator(const DiskGeometry& disk, const MaterialParams& material,
                                      const OpticalParams& optics,
                                      const IntensityProfile& intensity, const RadialGrid& grid) {
  disk.validate();
  material.validate();
  optics.validate();
  if (intensity.peak() < 0.0) throw InvalidInput("intensity must be nonnegative");
  PlateOperator op;
  op.basis = PlateBasis::build(grid, disk.radius);
  op.disk = disk;
  op.material = material;
  op.thin_plate_warning = disk.thin_plate_warning();
  op.stiffness = stiffness_form(*op.basis, disk, material, false);
  op.mass = mass_form(*op.basis, disk, material, nullptr);
  const auto w2 = trap_samples(*op.basis, material, optics, intensity);
  op.trap = mass_form(*op.basis, disk, material, &w2);
  return op;
}

namespace {

struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

EigenPairs generalized_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& mass) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, mass);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("plate eigensolve did not converge", kInfinity);
  return {es.eigenvalues(), es.eigenvectors()};
}

// Two steps of shifted inverse iteration, then a Rayleigh quotient.
double refine_pair(const Eigen::MatrixXd& a, const Eigen::MatrixXd& mass, double lambda,
                   Eigen::VectorXd& x) {
  const double shift = lambda - 1e-9 * std::max(std::abs(lambda), 1.0);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a - shift * mass);
  for (int it = 0; it < 2; ++it) {
    Eigen::VectorXd y = lu.solve(mass * x);
    if (!y.allFinite()) break;
    x = y / std::sqrt(y.dot(mass * y));
  }
  return x.dot(a * x) / x.dot(mass * x);
}

}  // namespace

std::vector<ModeSolution> solve_modes(const PlateOperator& op, int k_modes) {
  const int nb = static_cast<int>(op.mass.rows());
  if (k_modes < 1 || k_modes > nb) throw InvalidInput("k_modes must lie in [1, basis size]");
  const Eigen::MatrixXd a = op.stiffness + op.trap;
  const EigenPairs eig = generalized_solve(a, op.mass);

  // Scale-aware residual check on the returned pairs.
  const double scale = std::max(std::abs(eig.values[nb - 1]), 1.0);
  std::vector<ModeSolution> modes;
  modes.reserve(k_modes);
  for (int i = 0; i < k_modes; ++i) {
    Eigen::VectorXd x = eig.vectors.col(i);
    const Eigen::VectorXd mx = op.mass * x;
    const double res = (a * x - eig.values[i] * mx).norm() / (scale * mx.norm());
    if (!(res < 1e-8)) throw NumericalFailure("plate eigenpair residual too large", res);
    const double lambda = refine_pair(a, op.mass, eig.values[i], x);
    modes.push_back(make_mode(op, x, lambda));
  }
  return modes;
}

double strain_energy(const ModeSolution& mode, const DiskGeometry& disk,
                     const MaterialParams& material) {
  check_same_grid(mode, disk);
  const Eigen::MatrixXd k = stiffness_form(*mode.basis, disk, material, false);
  return std::max(0.0, 0.5 * mode.coefficients.dot(k * mode.coefficients));
}

double strain_energy_bulk(const ModeSolution& mode, const DiskGeometry& disk,
                          const MaterialParams& material) {
  check_same_grid(mode, disk);
  const Eigen::MatrixXd k = stiffness_form(*mode.basis, disk, material, true);
  return std::max(0.0, 0.5 * mode.coefficients.dot(k * mode.coefficients));
}

double optical_energy(const ModeSolution& mode, const DiskGeometry& disk,
                      const MaterialParams& material, const OpticalParams& optics,
                      const IntensityProfile& intensity) {
  check_same_grid(mode, disk);
  const auto w2 = trap_samples(*mode.basis, material, optics, intensity);
  const Eigen::MatrixXd t = mass_form(*mode.basis, disk, material, &w2);
  return std::max(0.0, 0.5 * mode.coefficients.dot(t * mode.coefficients));
}

double curvature_integral(const ModeSolution& mode, const DiskGeometry& disk,
                          int thickness_power) {
  check_same_grid(mode, disk);
  const PlateBasis& b = *mode.basis;
  const Eigen::VectorXd lap = b.laplacian * mode.coefficients;
  double acc = 0.0;
  for (Eigen::Index q = 0; q < lap.size(); ++q)
    acc += b.weight[q] * std::pow(disk.thickness.at_s(b.s[q]), thickness_power) * lap[q] * lap[q];
  // (lap zeta)^2 in physical units carries 1/a^4; the area element a^2.
  return b.cos_weight() * acc / (b.radius * b.radius);
}

double energy_ratio(const ModeSolution& mode) {
  if (mode.u_mech < kStrainFloor) return kInfinity;
  return mode.u_opt / mode.u_mech;
}

TunedMode tune_lowest_mode(const DiskGeometry& disk, const MaterialParams& material,
                           const OpticalParams& optics, const IntensityProfile& unit_intensity,
                           const RadialGrid& grid, double target_omega) {
  if (!(target_omega > 0.0)) throw InvalidInput("target frequency must be positive");
  if (unit_intensity.is_zero()) throw InvalidInput("intensity shape must be nonzero");
  const PlateOperator base =
      assemble_plate_operator(disk, material, optics, unit_intensity, grid);
  const double target = target_omega * target_omega;
  auto lowest = [&](double alpha) {
    const EigenPairs eig = generalized_solve(base.stiffness + alpha * base.trap, base.mass);
    return eig.values[0];
  };
  if (lowest(0.0) >= target)
    throw InvalidInput("target frequency lies below the untrapped lowest mode");

  // Start from the scale that puts the peak trap frequency on target.
  double hi = target / trap_frequency_squared(material, optics, unit_intensity.peak());
  int guard = 0;
  while (lowest(hi) < target) {
    hi *= 2.0;
    if (++guard > 200) throw NumericalFailure("could not bracket trap intensity", hi);
  }
  double lo = hi / 2.0;
  while (lo > 0.0 && lowest(lo) > target && guard++ < 400) lo /= 2.0;
  if (lowest(lo) > target) lo = 0.0;

  std::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(
      [&](double a) { return lowest(a) / target - 1.0; }, lo, hi,
      boost::math::tools::eps_tolerance<double>(48), iters);
  const double alpha = 0.5 * (root.first + root.second);

  PlateOperator op = base;
  op.trap = alpha * base.trap;
  TunedMode out;
  out.intensity_scale = alpha;
  out.mode = solve_modes(op, 1).front();
  return out;
}

}  // namespace optomech::plate
