#include "optomech/hankel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>

#include "optomech/core.hpp"

namespace optomech::hankel {

namespace {

constexpr double kPi = std::numbers::pi;

struct Kernel {
  Eigen::VectorXd zeros;  // j_1 .. j_{N+1}
  std::shared_ptr<const Eigen::MatrixXd> t;
  double raw_defect = 0.0;
};

Kernel build_kernel(int n) {
  Kernel k;
  k.zeros.resize(n + 1);
  for (int i = 0; i <= n; ++i) k.zeros[i] = boost::math::cyl_bessel_j_zero(0.0, i + 1);
  const double s = k.zeros[n];
  Eigen::VectorXd j1(n);
  for (int i = 0; i < n; ++i) j1[i] = std::abs(boost::math::cyl_bessel_j(1, k.zeros[i]));

  Eigen::MatrixXd t(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v =
          2.0 * boost::math::cyl_bessel_j(0, k.zeros[i] * k.zeros[j] / s) / (j1[i] * j1[j] * s);
      t(i, j) = v;
      t(j, i) = v;
    }
  k.raw_defect = (t * t - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();

  if (k.raw_defect > 1e-12) {
    if (!(k.raw_defect < 0.5))
      throw NumericalFailure("Hankel kernel is too far from an involution", k.raw_defect);
    // Newton-Schulz iteration for sign(T): X <- X (3 I - X^2) / 2.
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    double defect = k.raw_defect;
    for (int it = 0; it < 50 && defect > 1e-14; ++it) {
      const Eigen::MatrixXd sq = t * t;
      defect = (sq - eye).cwiseAbs().maxCoeff();
      t = 0.5 * t * (3.0 * eye - sq);
      t = 0.5 * (t + t.transpose()).eval();
    }
    defect = (t * t - eye).cwiseAbs().maxCoeff();
    if (!(defect < 1e-12)) throw NumericalFailure("Hankel kernel orthogonalization did not converge", defect);
  }
  k.t = std::make_shared<const Eigen::MatrixXd>(std::move(t));
  return k;
}

const Kernel& kernel(int n) {
  static std::mutex mutex;
  static std::map<int, Kernel> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_kernel(n)).first;
  return it->second;
}

Eigen::VectorXcd apply_real(const Eigen::MatrixXd& t, const Eigen::VectorXcd& x) {
  Eigen::VectorXcd y(x.size());
  y.real() = t * x.real();
  y.imag() = t * x.imag();
  return y;
}

}  // namespace

std::shared_ptr<const HankelGrid> HankelGrid::make(int n_points, double aperture) {
  if (n_points < 8) throw InvalidInput("Hankel grid needs at least 8 points");
  if (!(aperture > 0.0)) throw InvalidInput("Hankel aperture must be positive");
  const Kernel& k = kernel(n_points);
  const double s = k.zeros[n_points];

  std::shared_ptr<HankelGrid> g(new HankelGrid());
  g->aperture_ = aperture;
  g->band_ = s / (2.0 * kPi * aperture);
  g->raw_defect_ = k.raw_defect;
  g->t_ = k.t;
  g->r_.resize(n_points);
  g->k_.resize(n_points);
  g->j1_.resize(n_points);
  g->scale_.resize(n_points);
  g->weight_.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double j = k.zeros[i];
    g->r_[i] = j * aperture / s;
    g->k_[i] = j / aperture;
    g->j1_[i] = std::abs(boost::math::cyl_bessel_j(1, j));
    g->scale_[i] = aperture / g->j1_[i];
    g->weight_[i] = 2.0 * aperture * aperture / (s * s * g->j1_[i] * g->j1_[i]);
  }
  return g;
}

Eigen::VectorXcd HankelGrid::forward(const Eigen::VectorXcd& f) const {
  if (f.size() != r_.size()) throw InvalidInput("field does not match the Hankel grid");
  const Eigen::VectorXcd u = apply_real(*t_, to_scaled(f));
  return u.cwiseProduct(j1_ / (2.0 * kPi * band_));
}

Eigen::VectorXcd HankelGrid::inverse(const Eigen::VectorXcd& f_k) const {
  if (f_k.size() != r_.size()) throw InvalidInput("field does not match the Hankel grid");
  const Eigen::VectorXcd u = f_k.cwiseProduct((2.0 * kPi * band_) * j1_.cwiseInverse());
  return from_scaled(apply_real(*t_, u));
}

double FieldProfile::power() const {
  if (domain == Domain::Frequency)
    return qdht(*this, Direction::Backward).power();
  return 2.0 * kPi * grid->weight().dot(values.cwiseAbs2());
}

double FieldProfile::wavevector() const { return 2.0 * kPi / wavelength; }

FieldProfile gaussian_field(std::shared_ptr<const HankelGrid> grid, double waist,
                            double wavelength) {
  if (!(waist > 0.0)) throw InvalidInput("waist must be positive");
  FieldProfile f;
  f.values = grid->r().unaryExpr([waist](double r) {
    return std::complex<double>(std::exp(-r * r / (waist * waist)), 0.0);
  });
  f.grid = std::move(grid);
  f.wavelength = wavelength;
  return f;
}

FieldProfile qdht(const FieldProfile& field, Direction direction) {
  const Domain expect = direction == Direction::Forward ? Domain::Space : Domain::Frequency;
  if (field.domain != expect) throw InvalidInput("field is not in the domain this transform expects");
  FieldProfile out = field;
  if (direction == Direction::Forward) {
    out.values = field.grid->forward(field.values);
    out.domain = Domain::Frequency;
  } else {
    out.values = field.grid->inverse(field.values);
    out.domain = Domain::Space;
  }
  return out;
}

Eigen::VectorXcd propagation_phases(const HankelGrid& grid, double wavelength, double z) {
  const double k = 2.0 * kPi / wavelength;
  return grid.k().unaryExpr([k, z](double kp) {
    return std::polar(1.0, k * z - kp * kp * z / (2.0 * k));
  });
}

FieldProfile propagate(const FieldProfile& field, double z) {
  if (field.domain != Domain::Space) throw InvalidInput("propagate expects a real-space field");
  const HankelGrid& g = *field.grid;
  const Eigen::MatrixXd& t = g.transform();
  Eigen::VectorXcd u = apply_real(t, g.to_scaled(field.values));
  u = u.cwiseProduct(propagation_phases(g, field.wavelength, z));
  FieldProfile out = field;
  out.values = g.from_scaled(apply_real(t, u));
  return out;
}

double second_moment_waist(const FieldProfile& field) {
  if (field.domain != Domain::Space) throw InvalidInput("waist needs a real-space field");
  const Eigen::VectorXd i = field.values.cwiseAbs2();
  const Eigen::VectorXd& w = field.grid->weight();
  const Eigen::VectorXd& r = field.grid->r();
  const double norm = w.dot(i);
  if (!(norm > 0.0)) throw InvalidInput("field is identically zero");
  const double r2 = (w.cwiseProduct(i)).dot(r.cwiseAbs2()) / norm;
  return std::sqrt(2.0 * r2);
}

}  // namespace optomech::hankel
