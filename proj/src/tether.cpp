#include "optomech/tether.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "detail/quadrature.hpp"

namespace optomech::tether {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kShapeSamples = 401;

double tanh_safe(double g) { return std::tanh(g); }

// 1/cosh(g) without overflow.
double sech_safe(double g) { return g > 30.0 ? 2.0 * std::exp(-g) : 1.0 / std::cosh(g); }

// cos g tanh g - sin g: zero at the clamped-pinned (heavy membrane) tether modes.
double clamp_pin(double g) { return std::cos(g) * tanh_safe(g) - std::sin(g); }

double clamp_pin_slope(double g) {
  const double t = tanh_safe(g);
  const double se = sech_safe(g);
  return -std::sin(g) * t + std::cos(g) * se * se - std::cos(g);
}

double polish(auto&& f, double lo, double hi) {
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi,
                                                   boost::math::tools::eps_tolerance<double>(52),
                                                   iters);
  return 0.5 * (r.first + r.second);
}

struct Basis {
  double a, da, dda, ddda;
  double b, db, ddb, dddb;
};

// Bounded clamped-end basis pair at position x for wavenumber k.
Basis basis_at(double x, double k, double length) {
  const double u = k * x;
  const double g = k * length;
  const double eg = std::exp(-g);
  const double eu = std::exp(-u);
  const double el = std::exp(-k * (length - x));
  const double s = std::sin(u), c = std::cos(u);
  Basis o{};
  o.a = s - c + eu;
  o.da = k * (c + s - eu);
  o.dda = k * k * (-s + c + eu);
  o.ddda = k * k * k * (-c - s - eu);
  o.b = 2.0 * eg * c - el - eg * eu;
  o.db = k * (-2.0 * eg * s - el + eg * eu);
  o.ddb = k * k * (-2.0 * eg * c - el - eg * eu);
  o.dddb = k * k * k * (2.0 * eg * s - el + eg * eu);
  return o;
}

double shape_value(double c1, double tail, double x, double k, double length) {
  const Basis b = basis_at(x, k, length);
  return c1 * b.a + tail * b.b;
}

double curvature(double c1, double tail, double x, double k, double length) {
  const Basis b = basis_at(x, k, length);
  return c1 * b.dda + tail * b.ddb;
}

}  // namespace

std::string to_string(ModeKind kind) {
  switch (kind) {
    case ModeKind::CM:
      return "CM";
    case ModeKind::Tether:
      return "tether";
    case ModeKind::Mixed:
      return "mixed";
  }
  return "unknown";
}

double RigidTetherSystem::tether_mass() const {
  return material.density * tether.width * tether.width * tether.length;
}

double RigidTetherSystem::beta() const {
  return std::pow(12.0 * material.density /
                      (material.youngs_modulus * tether.width * tether.width),
                  0.25);
}

double RigidTetherSystem::bending_stiffness() const {
  return material.youngs_modulus * std::pow(tether.width, 4) / 12.0;
}

double RigidTetherSystem::gamma(double omega) const {
  return beta() * tether.length * std::sqrt(omega);
}

double RigidTetherSystem::omega_from_gamma(double g) const {
  const double bl = beta() * tether.length;
  return (g / bl) * (g / bl);
}

double RigidTetherSystem::pendulum_frequency() const {
  return std::sqrt(material.youngs_modulus * std::pow(tether.width, 4) /
                   (4.0 * membrane_mass * std::pow(tether.length, 3)));
}

void RigidTetherSystem::validate() const {
  if (!(membrane_mass > 0.0)) throw InvalidInput("membrane mass must be positive");
  tether.validate();
  material.validate();
  if (omega_opt < 0.0) throw InvalidInput("omega_opt must be nonnegative");
}

double characteristic_residual(double omega, const RigidTetherSystem& sys) {
  if (!(omega > 0.0)) throw InvalidInput("omega must be positive");
  const double g = sys.gamma(omega);
  const double k = sys.beta() * std::sqrt(omega);
  const double m = sys.membrane_mass;
  const double shear = sys.bending_stiffness() * k * k * k;
  const double spring = m * (omega * omega - sys.omega_opt * sys.omega_opt);
  const double value = spring * clamp_pin(g) + shear * (sech_safe(g) + std::cos(g));
  const double scale = m * (omega * omega + sys.omega_opt * sys.omega_opt) + shear;
  return value / scale;
}

std::vector<double> tether_asymptotes(const RigidTetherSystem& sys, double omega_max) {
  std::vector<double> out;
  const double g_max = sys.gamma(omega_max);
  for (int n = 1;; ++n) {
    const double guess = (n + 0.25) * kPi;
    if (guess - 0.5 > g_max) break;
    const double g = polish([](double x) { return clamp_pin(x); }, guess - 0.5, guess + 0.5);
    if (g > g_max) break;
    out.push_back(sys.omega_from_gamma(g));
  }
  return out;
}

double crossing_half_gap(double omega_n, const RigidTetherSystem& sys) {
  const double g = sys.gamma(omega_n);
  const double k = sys.beta() * std::sqrt(omega_n);
  const double c = sys.bending_stiffness() * k * k * k * (sech_safe(g) + std::cos(g));
  return std::sqrt(std::abs(c) / (sys.membrane_mass * g * std::abs(clamp_pin_slope(g))));
}

namespace {

std::vector<double> scan_roots(const RigidTetherSystem& sys, double omega_max, double step,
                               std::vector<std::pair<double, double>>* brackets) {
  const double g_max = sys.gamma(omega_max);
  const double g_cm = sys.gamma(std::hypot(sys.pendulum_frequency(), sys.omega_opt));
  const double g_lo = 1e-3 * std::min(g_cm, 1.0);
  auto f = [&](double g) { return characteristic_residual(sys.omega_from_gamma(g), sys); };

  std::vector<double> gs;
  const double g_switch = std::min(1.0, g_max);
  const int n_log = 400;
  for (int i = 0; i <= n_log; ++i) gs.push_back(g_lo * std::pow(g_switch / g_lo, double(i) / n_log));
  for (double g = g_switch + step; g < g_max; g += step) gs.push_back(g);
  gs.push_back(g_max);

  std::vector<double> roots;
  double prev = f(gs.front());
  for (std::size_t i = 1; i < gs.size(); ++i) {
    const double cur = f(gs[i]);
    if (cur == 0.0) {
      roots.push_back(gs[i]);
    } else if (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) {
      if (brackets) brackets->emplace_back(gs[i - 1], gs[i]);
      roots.push_back(polish(f, gs[i - 1], gs[i]));
    }
    prev = cur;
  }
  return roots;
}

}  // namespace

std::vector<TetherMode> solve_tether_spectrum(const RigidTetherSystem& sys, double omega_max) {
  sys.validate();
  if (!(omega_max > 0.0)) throw InvalidInput("omega_max must be positive");

  // Halve the scan step until two successive sweeps agree on the root count.
  double step = kPi / 256.0;
  std::vector<std::pair<double, double>> brackets;
  std::vector<double> roots = scan_roots(sys, omega_max, step, &brackets);
  bool stable = false;
  for (int attempt = 0; attempt < 6; ++attempt) {
    step *= 0.5;
    std::vector<std::pair<double, double>> fine_brackets;
    std::vector<double> fine = scan_roots(sys, omega_max, step, &fine_brackets);
    if (fine.size() == roots.size()) {
      stable = true;
      break;
    }
    roots = std::move(fine);
    brackets = std::move(fine_brackets);
  }
  if (!stable) {
    std::ostringstream msg;
    msg << "tether root scan did not stabilize; suspect brackets in gamma:";
    for (const auto& [lo, hi] : brackets) msg << " [" << lo << ", " << hi << "]";
    throw NumericalFailure(msg.str(), step);
  }

  std::vector<TetherMode> modes;
  for (double g : roots) {
    const double omega = sys.omega_from_gamma(g);
    const double res = characteristic_residual(omega, sys);
    if (!(std::abs(res) < 1e-8)) throw NumericalFailure("tether root failed to polish", res);
    modes.push_back(tether_mode_shape(omega, sys));
  }
  std::sort(modes.begin(), modes.end(),
            [](const TetherMode& a, const TetherMode& b) { return a.omega < b.omega; });

  // Classification: the mode nearest the expected CM frequency is the CM
  // branch unless it, and the trap, sit within 5 half-gaps of a tether
  // asymptote, where both partners are labelled mixed.
  const auto asym = tether_asymptotes(sys, 2.0 * omega_max);
  const double w_cm = std::hypot(sys.pendulum_frequency(), sys.omega_opt);
  std::size_t cm_index = 0;
  for (std::size_t i = 0; i < modes.size(); ++i)
    if (std::abs(modes[i].omega - w_cm) < std::abs(modes[cm_index].omega - w_cm)) cm_index = i;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    TetherMode& md = modes[i];
    int nearest = 0;
    double best = kInfinity;
    for (std::size_t n = 0; n < asym.size(); ++n) {
      if (std::abs(md.omega - asym[n]) < best) {
        best = std::abs(md.omega - asym[n]);
        nearest = static_cast<int>(n) + 1;
      }
    }
    bool mixed = false;
    if (nearest > 0) {
      const double wn = asym[nearest - 1];
      const double gap = crossing_half_gap(wn, sys);
      mixed = std::abs(md.omega - wn) < 5.0 * gap && std::abs(sys.omega_opt - wn) < 5.0 * gap;
    }
    if (mixed) {
      md.kind = ModeKind::Mixed;
      md.tether_index = nearest;
    } else if (i == cm_index) {
      md.kind = ModeKind::CM;
      md.tether_index = 0;
    } else {
      md.kind = ModeKind::Tether;
      md.tether_index = nearest;
    }
  }
  return modes;
}

TetherMode tether_mode_shape(double omega, const RigidTetherSystem& sys) {
  sys.validate();
  if (!(omega > 0.0)) throw InvalidInput("omega must be positive");
  const double len = sys.tether.length;
  const double k = sys.beta() * std::sqrt(omega);
  const double g = k * len;
  const double ei = sys.bending_stiffness();
  const double load = sys.membrane_mass * (sys.omega_opt * sys.omega_opt - omega * omega);

  const Basis e = basis_at(len, k, len);
  // Rows: phi''(L) = 0 and EI phi'''(L) - load phi(L) = 0, each scaled to unit norm.
  double q11 = e.dda, q12 = e.ddb;
  double q21 = ei * e.ddda - load * e.a, q22 = ei * e.dddb - load * e.b;
  const double n1 = std::hypot(q11, q12), n2 = std::hypot(q21, q22);
  double c1, tail;
  if (n1 >= n2) {
    c1 = -q12 / n1;
    tail = q11 / n1;
  } else {
    c1 = -q22 / n2;
    tail = q21 / n2;
  }

  TetherMode md;
  md.omega = omega;
  md.x.resize(kShapeSamples);
  md.shape.resize(kShapeSamples);
  double peak = 0.0;
  for (int i = 0; i < kShapeSamples; ++i) {
    md.x[i] = len * i / (kShapeSamples - 1.0);
    md.shape[i] = shape_value(c1, tail, md.x[i], k, len);
    peak = std::max(peak, std::abs(md.shape[i]));
  }
  const double tip = md.shape.back();
  const double norm = std::abs(tip) > 1e-6 * peak ? tip : peak;
  c1 /= norm;
  tail /= norm;
  for (double& v : md.shape) v /= norm;
  md.c1 = c1;
  md.tail = tail;
  md.c2 = 2.0 * tail * std::exp(-g) - c1;

  // Strain energy by composite Gauss-Legendre, eight panels per half wavelength.
  const int panels = std::max(16, static_cast<int>(std::ceil(8.0 * g / kPi)));
  const auto rule = detail::gauss_legendre(8, 0.0, 1.0);
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double x0 = len * p / panels;
    const double h = len / panels;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double kap = curvature(c1, tail, x0 + h * rule.nodes[q], k, len);
      acc += h * rule.weights[q] * kap * kap;
    }
  }
  md.u_mech = 0.5 * ei * acc;
  md.u_opt = 0.5 * sys.membrane_mass * sys.omega_opt * sys.omega_opt * md.shape.back() *
             md.shape.back();
  return md;
}

double tether_energy_ratio(const TetherMode& mode, const RigidTetherSystem&) {
  if (mode.u_mech <= 0.0) return mode.u_opt > 0.0 ? kInfinity : 0.0;
  return mode.u_opt / mode.u_mech;
}

double composed_energy_ratio(double disk_ratio, double tether_ratio) {
  if (disk_ratio < 0.0 || tether_ratio < 0.0)
    throw InvalidInput("energy ratios must be nonnegative");
  if (disk_ratio == 0.0 || tether_ratio == 0.0) return 0.0;
  const double inv = (std::isinf(disk_ratio) ? 0.0 : 1.0 / disk_ratio) +
                     (std::isinf(tether_ratio) ? 0.0 : 1.0 / tether_ratio);
  return inv == 0.0 ? kInfinity : 1.0 / inv;
}

const TetherMode& cm_branch(const std::vector<TetherMode>& modes, const RigidTetherSystem& sys) {
  if (modes.empty()) throw InvalidInput("empty tether spectrum");
  for (const auto& md : modes)
    if (md.kind == ModeKind::CM) return md;
  const double w_cm = std::hypot(sys.pendulum_frequency(), sys.omega_opt);
  return *std::min_element(modes.begin(), modes.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.omega - w_cm) < std::abs(b.omega - w_cm);
  });
}

}  // namespace optomech::tether
