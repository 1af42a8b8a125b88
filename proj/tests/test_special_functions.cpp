#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <boost/math/special_functions/spherical_harmonic.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "berrylab/errors.hpp"
#include "berrylab/quadrature.hpp"
#include "berrylab/special_functions.hpp"
#include "doctest.h"

using namespace berrylab;
using std::numbers::pi;

namespace {

// Ascending series in 50-digit arithmetic, summed far past convergence.
double series_j0(double x) {
  using big = boost::multiprecision::cpp_bin_float_50;
  big term = 1;
  big sum = 1;
  const big q = big(x) * big(x) / 4;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (big(k) * big(k));
    sum += term;
  }
  return static_cast<double>(sum);
}

std::vector<double> unit3(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

}  // namespace

TEST_CASE("bessel_j reference values") {
  CHECK(bessel_j(0.0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-14));
  CHECK(bessel_j(0.5, pi / 2) == doctest::Approx(2.0 / pi).epsilon(1e-13));
  CHECK(bessel_j(0.0, 0.0) == 1.0);
  CHECK(bessel_j(3.0, 0.0) == 0.0);
}

TEST_CASE("bessel_j agrees with Boost on [0, 50]") {
  double worst = 0.0;
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.5, 7.0, 10.0, 16.5}) {
    for (int i = 0; i <= 500; ++i) {
      const double x = 0.1 * i;
      worst = std::max(worst, std::fabs(bessel_j(nu, x) - boost::math::cyl_bessel_j(nu, x)));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("J0 matches the multiprecision series") {
  for (int i = 0; i <= 60; ++i) {
    const double x = 0.25 * i;
    CHECK(std::fabs(bessel_j(0.0, x) - series_j0(x)) < 1e-13);
  }
}

TEST_CASE("bessel zeros") {
  CHECK(bessel_j_zero(0.0, 1) == doctest::Approx(2.404825557695773).epsilon(1e-14));
  CHECK(bessel_j_zero(0.0, 2) == doctest::Approx(5.520078110286311).epsilon(1e-14));
  CHECK(bessel_j_zero(0.5, 1) == doctest::Approx(pi).epsilon(1e-14));
  for (int k = 1; k <= 6; ++k) {
    CHECK(bessel_j_zero(2.0, k) == doctest::Approx(boost::math::cyl_bessel_j_zero(2.0, k)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(bessel_j_zero(0.0, 0), DomainError);
}

TEST_CASE("legendre polynomials") {
  CHECK(legendre_p(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
  double worst = 0.0;
  bool bounded = true;
  for (int l = 0; l <= 100; ++l) {
    for (int i = 0; i <= 200; ++i) {
      const double x = -1.0 + 0.01 * i;
      const double v = legendre_p(l, x);
      bounded = bounded && std::fabs(v) <= 1.0 + 1e-12;
      worst = std::max(worst, std::fabs(v - boost::math::legendre_p(l, x)));
    }
  }
  CHECK(bounded);
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(legendre_p(3, 1.5), DomainError);
}

TEST_CASE("gegenbauer with alpha 1/2 is legendre") {
  for (int n = 0; n <= 12; ++n) {
    for (double x : {-0.9, -0.3, 0.0, 0.41, 0.77}) {
      CHECK(gegenbauer_c(n, 0.5, x) == doctest::Approx(boost::math::legendre_p(n, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("spherical harmonic values") {
  const std::vector<double> north{0.0, 0.0, 1.0};
  CHECK(spherical_harmonic({3, 0, 1}, north) == doctest::Approx(1.0 / std::sqrt(4 * pi)).epsilon(1e-14));
  const std::vector<double> e1{1.0, 0.0};
  CHECK(spherical_harmonic({2, 1, 1}, e1) == doctest::Approx(1.0 / std::sqrt(pi)).epsilon(1e-14));
  CHECK(spherical_harmonic({2, 0, 1}, e1) == doctest::Approx(1.0 / std::sqrt(2 * pi)).epsilon(1e-14));
  const std::vector<double> off{0.5, 0.5, 0.5};
  CHECK_THROWS_AS(spherical_harmonic({3, 2, 1}, off), DomainError);
}

TEST_CASE("real harmonics match Boost complex harmonics without the Condon-Shortley phase") {
  const std::vector<std::pair<double, double>> probes{{0.3, 0.2}, {1.1, 2.5}, {2.2, -1.3}, {0.9, 4.0}, {2.9, 0.7}};
  for (int l = 0; l <= 8; ++l) {
    for (int order = 1; order <= 2 * l + 1; ++order) {
      const int m = order / 2;
      const bool sine = order > 1 && order % 2 == 1;
      auto reference = [&](double theta, double phi) {
        if (m == 0) return boost::math::spherical_harmonic_r(l, 0, theta, phi);
        const double v = sine ? boost::math::spherical_harmonic_i(l, m, theta, phi)
                              : boost::math::spherical_harmonic_r(l, m, theta, phi);
        return std::sqrt(2.0) * v;
      };
      const double sign = m % 2 ? -1.0 : 1.0;
      for (auto [theta, phi] : probes) {
        const double ours = spherical_harmonic({3, l, order}, unit3(theta, phi));
        const double ref = reference(theta, phi);
        CHECK(std::fabs(ours - sign * ref) < 1e-12);
      }
    }
  }
}

TEST_CASE("addition theorem on S^2") {
  const auto a = unit3(0.7, 1.9);
  const auto b = unit3(2.1, -0.4);
  const double cosine = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  for (int l : {1, 4, 9, 20}) {
    double sum = 0.0;
    for (int order = 1; order <= 2 * l + 1; ++order) {
      sum += spherical_harmonic({3, l, order}, a) * spherical_harmonic({3, l, order}, b);
    }
    CHECK(sum == doctest::Approx((2 * l + 1) / (4 * pi) * boost::math::legendre_p(l, cosine)).epsilon(1e-11));
  }
}

TEST_CASE("harmonics are orthonormal under quadrature") {
  // Gauss-Legendre in cos(theta) times a periodic rule in phi integrates
  // degree <= 12 products exactly.
  const QuadratureRule z = gauss_legendre(16);
  const QuadratureRule phi = periodic_trapezoid(32);
  std::vector<HarmonicIndex> labels;
  for (int l = 0; l <= 6; ++l) {
    for (int order = 1; order <= 2 * l + 1; ++order) labels.push_back({3, l, order});
  }
  const std::size_t n = labels.size();
  std::vector<double> gram(n * n, 0.0);
  for (std::size_t i = 0; i < z.nodes.size(); ++i) {
    for (std::size_t j = 0; j < phi.nodes.size(); ++j) {
      const double s = std::sqrt(1.0 - z.nodes[i] * z.nodes[i]);
      const std::vector<double> x{s * std::cos(phi.nodes[j]), s * std::sin(phi.nodes[j]), z.nodes[i]};
      std::vector<double> v(n);
      for (std::size_t a = 0; a < n; ++a) v[a] = spherical_harmonic(labels[a], x);
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) gram[a * n + b] += z.weights[i] * phi.weights[j] * v[a] * v[b];
      }
    }
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) worst = std::max(worst, std::fabs(gram[a * n + b] - (a == b ? 1.0 : 0.0)));
  }
  CHECK(worst < 1e-8);

  // Circle harmonics.
  const QuadratureRule circle = periodic_trapezoid(64);
  for (int l1 = 0; l1 <= 6; ++l1) {
    for (int l2 = 0; l2 <= 6; ++l2) {
      for (int o1 = 1; o1 <= (l1 == 0 ? 1 : 2); ++o1) {
        for (int o2 = 1; o2 <= (l2 == 0 ? 1 : 2); ++o2) {
          double s = 0.0;
          for (std::size_t k = 0; k < circle.nodes.size(); ++k) {
            const std::vector<double> x{std::cos(circle.nodes[k]), std::sin(circle.nodes[k])};
            s += circle.weights[k] * spherical_harmonic({2, l1, o1}, x) * spherical_harmonic({2, l2, o2}, x);
          }
          CHECK(std::fabs(s - ((l1 == l2 && o1 == o2) ? 1.0 : 0.0)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("harmonic multiplicities") {
  CHECK(harmonic_multiplicity(2, 0) == 1);
  CHECK(harmonic_multiplicity(2, 5) == 2);
  CHECK(harmonic_multiplicity(3, 5) == 11);
}

TEST_CASE("berry kernel") {
  CHECK(berry_kernel(3, 1.0) == doctest::Approx(0.8414709848).epsilon(1e-10));
  CHECK(std::fabs(berry_kernel(2, 2.404825557695773)) < 1e-9);
  CHECK(berry_kernel(2, 0.0) == 1.0);
  CHECK(berry_kernel(3, 0.0) == 1.0);
  double worst2 = 0.0;
  double worst3 = 0.0;
  bool bounded = true;
  for (int i = 0; i <= 5000; ++i) {
    const double r = 0.01 * i;
    const double k2 = berry_kernel(2, r);
    const double k3 = berry_kernel(3, r);
    bounded = bounded && std::fabs(k2) <= 1.0 && std::fabs(k3) <= 1.0;
    worst2 = std::max(worst2, std::fabs(k2 - boost::math::cyl_bessel_j(0, r)));
    if (r > 0) worst3 = std::max(worst3, std::fabs(k3 - std::sin(r) / r));
  }
  CHECK(worst2 < 1e-12);
  CHECK(worst3 < 1e-12);
  CHECK(bounded);
  CHECK(berry_kernel_constant(2) == doctest::Approx(1.0));
  CHECK(berry_kernel_constant(3) == doctest::Approx(std::sqrt(pi / 2)));
}

TEST_CASE("mehler-heine asymptotic") {
  double worst = 0.0;
  for (int i = 0; i <= 300; ++i) {
    const double r = 0.01 * i;
    worst = std::max(worst, std::fabs(legendre_p(200, std::cos(r / 200)) - bessel_j(0.0, r)));
  }
  CHECK(worst < 0.01);
}

TEST_CASE("bessel_radial profile and derivatives") {
  for (double nu : {0.0, 0.5, 2.0}) {
    for (double s : {0.0, 0.3, 4.0, 30.0}) {
      const double r = std::sqrt(s);
      const double expected = r == 0.0 ? std::pow(0.5, nu) / std::tgamma(nu + 1.0)
                                       : boost::math::cyl_bessel_j(nu, r) / std::pow(r, nu);
      CHECK(bessel_radial(nu, s) == doctest::Approx(expected).epsilon(1e-12));
      if (s > 0.0) {
        const double h = 1e-5;
        auto g = [&](double t) { return boost::math::cyl_bessel_j(nu, std::sqrt(t)) / std::pow(std::sqrt(t), nu); };
        const double fd = (g(s + h) - g(s - h)) / (2 * h);
        CHECK(bessel_radial(nu, s, 1) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("solid harmonics are harmonic and restrict to the sphere harmonics") {
  for (int d : {2, 3}) {
    SolidHarmonics solid(d, 6);
    const MultiIndexTable& table = MultiIndexTable::get(d, 2);
    const std::vector<double> y = d == 2 ? std::vector<double>{0.4, -0.7} : std::vector<double>{0.4, -0.7, 0.3};
    std::vector<Jet> out;
    solid.evaluate(coordinate_jets(table, y), out);
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    std::vector<double> unit(y);
    for (double& v : unit) v /= norm;
    for (std::size_t i = 0; i < solid.count(); ++i) {
      double lap = 0.0;
      for (int a = 0; a < d; ++a) {
        MultiIndex alpha{};
        alpha[static_cast<std::size_t>(a)] = 2;
        lap += out[i].derivative(table.position(alpha));
      }
      CHECK(std::fabs(lap) < 1e-10);
      const HarmonicIndex& idx = solid.index(i);
      CHECK(out[i].value() ==
            doctest::Approx(std::pow(norm, idx.degree) * spherical_harmonic(idx, unit)).epsilon(1e-12));
    }
  }
}
