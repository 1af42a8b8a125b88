#pragma once

#include <vector>

namespace berrylab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// n-point trapezoid rule on the periodic interval [0, 2 pi).
QuadratureRule periodic_trapezoid(int n);

}  // namespace berrylab
