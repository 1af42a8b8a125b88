#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

#include "berrylab/errors.hpp"
#include "berrylab/manifolds.hpp"
#include "berrylab/quadrature.hpp"
#include "doctest.h"

using namespace berrylab;
using std::numbers::pi;

namespace {

// Eigenvalue -> multiplicity for a 2D torus by scanning every lattice vector.
std::map<long long, int> brute_force_square(long long max_norm2) {
  std::map<long long, int> out;
  const long long bound = static_cast<long long>(std::sqrt(static_cast<double>(max_norm2))) + 1;
  for (long long a = -bound; a <= bound; ++a) {
    for (long long b = -bound; b <= bound; ++b) {
      const long long n = a * a + b * b;
      if (n > 0 && n <= max_norm2) ++out[n];
    }
  }
  return out;
}

double dot3(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

std::size_t mode_position(const EigenvalueEntry& e, long long a, long long b) {
  for (std::size_t j = 0; j < e.modes.size(); ++j) {
    if ((e.modes[j][0] == a && e.modes[j][1] == b) || (e.modes[j][0] == -a && e.modes[j][1] == -b)) return j;
  }
  FAIL("mode not found");
  return 0;
}

}  // namespace

TEST_CASE("square torus multiplicity 12 at 25") {
  const ManifoldSpec t = ManifoldSpec::torus({1.0, 1.0});
  const EigenvalueEntry e = eigenspace(t, 4 * pi * pi * 25);
  CHECK(e.multiplicity == 12);
  CHECK(e.modes.size() == 6);
  for (const auto& m : e.modes) CHECK(m[0] * m[0] + m[1] * m[1] == 25);
}

TEST_CASE("square torus spectrum matches brute-force lattice counts") {
  const ManifoldSpec t = ManifoldSpec::torus({1.0, 1.0});
  const double lambda_max = 1e4;
  const auto entries = eigenvalues_up_to(t, lambda_max);
  const auto expected = brute_force_square(static_cast<long long>(lambda_max / (4 * pi * pi)));
  REQUIRE(entries.size() == expected.size());
  auto it = expected.begin();
  for (const auto& e : entries) {
    CHECK(e.lambda == doctest::Approx(4 * pi * pi * static_cast<double>(it->first)));
    CHECK(e.multiplicity == it->second);
    ++it;
  }
  CHECK(std::is_sorted(entries.begin(), entries.end(),
                       [](const EigenvalueEntry& a, const EigenvalueEntry& b) { return a.lambda < b.lambda; }));
}

TEST_CASE("three-dimensional torus counting function") {
  const ManifoldSpec t = ManifoldSpec::torus({1.0, 1.0, 1.0});
  const double lambda_max = 4 * pi * pi * 30.5;
  long long brute = 0;
  for (int a = -6; a <= 6; ++a)
    for (int b = -6; b <= 6; ++b)
      for (int c = -6; c <= 6; ++c) {
        const int n = a * a + b * b + c * c;
        if (n > 0 && n <= 30) ++brute;
      }
  long long counted = 0;
  for (const auto& e : eigenvalues_up_to(t, lambda_max)) counted += e.multiplicity;
  CHECK(counted == brute);
}

TEST_CASE("sphere degrees") {
  const EigenvalueEntry e = sphere_degree(5);
  CHECK(e.lambda == 30.0);
  CHECK(e.multiplicity == 11);
  const auto all = eigenvalues_up_to(ManifoldSpec::sphere(), 110.0);
  REQUIRE(all.size() == 10);
  CHECK(all.back().lambda == 110.0);
}

TEST_CASE("irrational torus has multiplicity at most 4") {
  const ManifoldSpec t = ManifoldSpec::torus({1.0, std::pow(2.0, 0.25)}, true);
  const auto entries = eigenvalues_up_to(t, 1e4);
  CHECK(!entries.empty());
  int worst = 0;
  for (const auto& e : entries) worst = std::max(worst, e.multiplicity);
  CHECK(worst <= 4);
}

TEST_CASE("spectrum argument checks") {
  CHECK_THROWS_AS(eigenvalues_up_to(ManifoldSpec::torus({1.0, 1.0}), -1.0), DomainError);
  CHECK_THROWS(ManifoldSpec::torus({1.0, -2.0}));
  CHECK_THROWS(eigenspace(ManifoldSpec::torus({1.0, 1.0}), 4 * pi * pi * 3));
}

TEST_CASE("torus single mode is sqrt2 cos with unit L2 norm") {
  const ManifoldSpec t = ManifoldSpec::torus({1.0, 1.0});
  const EigenvalueEntry e = eigenspace(t, 4 * pi * pi * 25);
  std::vector<double> c(12, 0.0);
  c[2 * mode_position(e, 3, 4)] = 5.0;
  const Eigenfunction psi = Eigenfunction::make(t, e, c);
  const int n = 40;
  double norm2 = 0.0;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::vector<double> x{(i + 0.5) / n, (j + 0.5) / n};
      const double v = psi.value(x);
      norm2 += v * v / (n * n);
      worst = std::max(worst, std::fabs(std::fabs(v) - std::fabs(std::sqrt(2.0) * std::cos(2 * pi * (3 * x[0] + 4 * x[1])))));
    }
  }
  CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(Eigenfunction::make(t, e, std::vector<double>(12, 0.0)), DomainError);
  CHECK_THROWS(Eigenfunction::make(t, e, std::vector<double>(5, 1.0)));
}

TEST_CASE("sphere zonal eigenfunction is normalized Legendre") {
  const QuadratureRule z = gauss_legendre(40);
  for (int l : {1, 4, 11}) {
    const EigenvalueEntry e = sphere_degree(l);
    std::vector<double> c(static_cast<std::size_t>(e.multiplicity), 0.0);
    c[0] = 2.0;
    const Eigenfunction psi = Eigenfunction::make(ManifoldSpec::sphere(), e, c);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < z.nodes.size(); ++i) {
      const double s = std::sqrt(1 - z.nodes[i] * z.nodes[i]);
      const std::vector<double> x{s * std::cos(0.3), s * std::sin(0.3), z.nodes[i]};
      const double v = psi.value(x);
      norm2 += 2 * pi * z.weights[i] * v * v;
      CHECK(std::fabs(v) == doctest::Approx(std::sqrt(2.0 * l + 1) * std::fabs(boost::math::legendre_p(l, z.nodes[i]))).epsilon(1e-10));
    }
    CHECK(norm2 == doctest::Approx(4 * pi).epsilon(1e-10));
  }
}

TEST_CASE("random-coefficient eigenfunctions satisfy the eigen equation") {
  Engine engine = make_engine(3);
  std::normal_distribution<double> g;
  const ManifoldSpec torus = ManifoldSpec::torus({1.0, 1.3});
  const ManifoldSpec sphere = ManifoldSpec::sphere();
  for (const auto& [spec, entry] : {std::pair{torus, eigenvalues_up_to(torus, 2000.0).back()},
                                    std::pair{sphere, sphere_degree(12)}}) {
    std::vector<double> c(static_cast<std::size_t>(entry.multiplicity));
    for (double& v : c) v = g(engine);
    const Eigenfunction psi = Eigenfunction::make(spec, entry, c);
    for (int i = 0; i < 10; ++i) {
      const BasePoint p = random_base_point(spec, -1, engine);
      CHECK(psi.eigen_residual(p) < 1e-9 * entry.lambda);
    }
  }
}

TEST_CASE("exp map") {
  const ManifoldSpec t = ManifoldSpec::torus({1.0, 1.0});
  const BasePoint p = make_base_point(t, std::vector<double>{0.9, 0.0});
  const Point q = exp_map(t, p, std::vector<double>{0.2, 0.0});
  CHECK(q[0] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(q[1] == 0.0);
  const Point same = exp_map(t, p, std::vector<double>{0.0, 0.0});
  CHECK(same == p.position);

  const ManifoldSpec s = ManifoldSpec::sphere();
  const BasePoint north = make_base_point(s, std::vector<double>{0.0, 0.0, 1.0});
  const Point eq = exp_map(s, north, std::vector<double>{pi / 2, 0.0});
  CHECK(std::sqrt(dot3(eq, eq)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::fabs(eq[2]) < 1e-14);
  CHECK(exp_map(s, north, std::vector<double>{0.0, 0.0}) == north.position);
  CHECK_THROWS_AS(exp_map(s, north, std::vector<double>{pi, 0.0}), DomainError);
}

TEST_CASE("exp map is an isometry to first order at the base point") {
  const ManifoldSpec s = ManifoldSpec::sphere();
  Engine engine = make_engine(12);
  std::uniform_real_distribution<double> u(-0.07, 0.07);
  for (int i = 0; i < 50; ++i) {
    const BasePoint p = random_base_point(s, -1, engine);
    const std::vector<double> v{u(engine), u(engine)};
    const std::vector<double> w{u(engine), u(engine)};
    const Point a = exp_map(s, p, v);
    const Point b = exp_map(s, p, w);
    const double dist = geodesic_distance(s, a, b);
    const double flat = std::hypot(v[0] - w[0], v[1] - w[1]);
    const double size = v[0] * v[0] + v[1] * v[1] + w[0] * w[0] + w[1] * w[1];
    CHECK(std::fabs(dist - flat) <= size);
  }
}

TEST_CASE("random base points") {
  const ManifoldSpec t = ManifoldSpec::torus({1.0, 1.0});
  Engine engine = make_engine(77);
  double sx = 0.0;
  double sy = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const BasePoint p = random_base_point(t, -1, engine);
    sx += p.position[0];
    sy += p.position[1];
  }
  CHECK(std::fabs(sx / 1e4 - 0.5) < 0.02);
  CHECK(std::fabs(sy / 1e4 - 0.5) < 0.02);

  const ManifoldSpec s = ManifoldSpec::sphere();
  double sz = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const BasePoint p = random_base_point(s, 0, engine);
    CHECK(p.chart == 0);
    CHECK(p.position[2] > 0.0);
    sz += p.position[2];
  }
  CHECK(std::fabs(sz / 1e4 - 0.5) < 0.02);

  CHECK(random_base_point(s, -1, 5).position == random_base_point(s, -1, 5).position);
}

TEST_CASE("chart covers and frames") {
  CHECK(chart_cover(ManifoldSpec::torus({1.0, 2.0})).size() == 1);
  const ManifoldSpec s = ManifoldSpec::sphere();
  CHECK(chart_cover(s).size() == 2);
  Engine engine = make_engine(8);
  for (int i = 0; i < 100; ++i) {
    const BasePoint p = random_base_point(s, -1, engine);
    CHECK(chart_of(s, p.position) == p.chart);
    const Point& v1 = p.frame[0];
    const Point& v2 = p.frame[1];
    CHECK(std::fabs(dot3(v1, v1) - 1.0) < 1e-12);
    CHECK(std::fabs(dot3(v2, v2) - 1.0) < 1e-12);
    CHECK(std::fabs(dot3(v1, v2)) < 1e-12);
    CHECK(std::fabs(dot3(v1, p.position)) < 1e-12);
    CHECK(std::fabs(dot3(v2, p.position)) < 1e-12);
  }
  const BasePoint q = make_base_point(ManifoldSpec::torus({2.0, 3.0}), std::vector<double>{0.5, 0.5});
  CHECK(q.frame[0][0] == 1.0);
  CHECK(q.frame[1][1] == 1.0);
}

TEST_CASE("quadrature base points carry unit total weight") {
  for (const ManifoldSpec& spec : {ManifoldSpec::torus({1.0, 2.0}), ManifoldSpec::sphere()}) {
    for (int chart : {-1, 0}) {
      double w = 0.0;
      for (const auto& q : quadrature_base_points(spec, chart, 12)) w += q.weight;
      CHECK(w == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}
