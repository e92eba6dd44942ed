// Zero-order quasi-discrete Hankel transform on Bessel-zero samples, and
// paraxial free-space propagation of axisymmetric fields built on it.
//
// Samples sit at r_i = j_i R / S and k_i = j_i / R with j_i the zeros of J0
// and S = j_{N+1}. In the scaled variables F_i = f(r_i) R / |J1(j_i)| the
// transform is the symmetric matrix T_ij = 2 J0(j_i j_j / S) / (|J1(j_i)| |J1(j_j)| S),
// which is orthogonal up to a small defect. The defect is removed by replacing
// the eigenvalues of T with their signs, so T T = I to rounding and propagation
// is exactly unitary in the scaled norm.

#pragma once

#include <complex>
#include <memory>

#include <Eigen/Dense>

namespace optomech::hankel {

class HankelGrid {
 public:
  static std::shared_ptr<const HankelGrid> make(int n_points, double aperture);

  int size() const { return static_cast<int>(r_.size()); }
  double aperture() const { return aperture_; }
  const Eigen::VectorXd& r() const { return r_; }          // m
  const Eigen::VectorXd& k() const { return k_; }          // rad/m
  const Eigen::VectorXd& scale() const { return scale_; }  // R / |J1(j_i)|
  /// Quadrature weight for integral g(r) r dr on the samples.
  const Eigen::VectorXd& weight() const { return weight_; }
  const Eigen::MatrixXd& transform() const { return *t_; }
  /// Largest |T T - I| entry before orthogonalization.
  double raw_defect() const { return raw_defect_; }

  /// F(k_j) = integral f(r) J0(k_j r) r dr.
  Eigen::VectorXcd forward(const Eigen::VectorXcd& f) const;
  /// f(r_i) from F(k_j).
  Eigen::VectorXcd inverse(const Eigen::VectorXcd& f_k) const;

  Eigen::VectorXcd to_scaled(const Eigen::VectorXcd& f) const { return f.cwiseProduct(scale_); }
  Eigen::VectorXcd from_scaled(const Eigen::VectorXcd& u) const { return u.cwiseQuotient(scale_); }

 private:
  HankelGrid() = default;
  Eigen::VectorXd r_, k_, scale_, weight_, j1_;
  double aperture_ = 0.0;
  double band_ = 0.0;  // S / (2 pi R)
  double raw_defect_ = 0.0;
  std::shared_ptr<const Eigen::MatrixXd> t_;
};

enum class Domain { Space, Frequency };

struct FieldProfile {
  std::shared_ptr<const HankelGrid> grid;
  Eigen::VectorXcd values;
  double wavelength = 1e-6;
  Domain domain = Domain::Space;

  /// 2 pi integral |E|^2 r dr.
  double power() const;
  double wavevector() const;
};

FieldProfile gaussian_field(std::shared_ptr<const HankelGrid> grid, double waist,
                            double wavelength);

/// Forward moves Space to Frequency, Backward the reverse; a mismatched domain throws.
enum class Direction { Forward, Backward };
FieldProfile qdht(const FieldProfile& field, Direction direction);

/// E~ -> exp(i k z - i k_perp^2 z / (2k)) E~. Any real z.
FieldProfile propagate(const FieldProfile& field, double z);

/// Diagonal of exp(i k z - i k_perp^2 z / (2k)) on the grid frequencies.
Eigen::VectorXcd propagation_phases(const HankelGrid& grid, double wavelength, double z);

/// 1/e^2 intensity radius from the second moment, w^2 = 2 <r^2>.
double second_moment_waist(const FieldProfile& field);

}  // namespace optomech::hankel
