#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace optomech::detail {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n nodes mapped onto [lo, hi].
inline Rule gauss_legendre(int n, double lo, double hi) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // nodes come out descending in x; store ascending
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[n - 1 - i] = half * 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

/// Legendre P_k(x), P_k'(x), P_k''(x) for k < n, valid on the closed interval.
inline void legendre_table(double x, int n, std::vector<double>& p, std::vector<double>& dp,
                           std::vector<double>& ddp) {
  p.assign(n, 0.0);
  dp.assign(n, 0.0);
  ddp.assign(n, 0.0);
  p[0] = 1.0;
  if (n > 1) {
    p[1] = x;
    dp[1] = 1.0;
  }
  for (int k = 1; k + 1 < n; ++k) {
    p[k + 1] = ((2.0 * k + 1.0) * x * p[k] - k * p[k - 1]) / (k + 1.0);
    dp[k + 1] = dp[k - 1] + (2.0 * k + 1.0) * p[k];
    ddp[k + 1] = ddp[k - 1] + (2.0 * k + 1.0) * dp[k];
  }
}

}  // namespace optomech::detail
