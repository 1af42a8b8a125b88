#include "berrylab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "berrylab/errors.hpp"

namespace berrylab {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = mid - half * x;
    rule.nodes[hi] = mid + half * x;
    rule.weights[lo] = half * w;
    rule.weights[hi] = half * w;
  }
  return rule;
}

QuadratureRule periodic_trapezoid(int n) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  QuadratureRule rule;
  const double h = 2.0 * std::numbers::pi / n;
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(i * h);
    rule.weights.push_back(h);
  }
  return rule;
}

}  // namespace berrylab
