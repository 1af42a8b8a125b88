#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "berrylab/berry_field.hpp"
#include "berrylab/errors.hpp"
#include "berrylab/localization.hpp"
#include "berrylab/stats.hpp"
#include "doctest.h"

using namespace berrylab;
using std::numbers::pi;

namespace {

double laplacian_plus_value(const DerivativeTable& t, std::size_t node) {
  double lap = 0.0;
  for (int a = 0; a < t.dimension; ++a) {
    MultiIndex alpha{};
    alpha[static_cast<std::size_t>(a)] = 2;
    lap += t.at(node, t.table().position(alpha));
  }
  return lap + t.at(node, 0);
}

std::vector<Point> random_points(int d, double radius, int count, std::uint64_t seed) {
  Engine engine = make_engine(seed);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) out.push_back(random_in_ball(d, radius, engine));
  return out;
}

}  // namespace

TEST_CASE("plane-wave ensemble") {
  const PlaneWaveEnsemble a = sample_plane_wave(3, 64, 11);
  const PlaneWaveEnsemble b = sample_plane_wave(3, 64, 11);
  CHECK(a.count() == 64);
  for (std::size_t k = 0; k < a.count(); ++k) {
    const Point& t = a.directions[k];
    CHECK(std::hypot(t[0], t[1], t[2]) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a.phases[k] >= 0.0);
    CHECK(a.phases[k] < 2 * pi);
    CHECK(t == b.directions[k]);
    CHECK(a.phases[k] == b.phases[k]);
  }
  CHECK_THROWS_AS(sample_plane_wave(2, 0, 1), DomainError);
  CHECK_THROWS_AS(sample_plane_wave(4, 8, 1), DomainError);
}

TEST_CASE("single plane wave") {
  PlaneWaveEnsemble one;
  one.dimension = 2;
  one.directions = {Point{1.0, 0.0, 0.0}};
  one.phases = {0.0};
  const std::vector<Point> origin{Point{}};
  const DerivativeTable t = eval_plane_wave(one, origin, 2);
  CHECK(t.at(0, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(t.at(0, t.table().position({2, 0, 0})) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-15));
  CHECK(t.at(0, t.table().position({0, 2, 0})) == 0.0);
  CHECK(std::fabs(laplacian_plus_value(t, 0)) < 1e-15);
  CHECK_THROWS(eval_plane_wave(one, origin, 5));
}

TEST_CASE("plane-wave samples solve the Helmholtz equation") {
  for (int d : {2, 3}) {
    const PlaneWaveEnsemble ens = sample_plane_wave(d, 256, 5);
    const DerivativeTable t = eval_plane_wave(ens, random_points(d, 4.0, 10, 9), 2);
    for (std::size_t i = 0; i < t.points.size(); ++i) CHECK(std::fabs(laplacian_plus_value(t, i)) < 1e-10);
  }
}

TEST_CASE("plane-wave covariance and variance") {
  std::vector<double> rs;
  for (int i = 0; i <= 20; ++i) rs.push_back(0.25 * i);
  CovarianceOptions opts;
  const CovarianceProfile p = empirical_covariance({SamplerKind::PlaneWave, 2, 256, 16}, 4000, rs, 21, opts);
  CHECK(p.samples == 4000);
  CHECK(p.sup_deviation() < 0.05);
  CHECK(std::fabs(p.estimate[0] - 1.0) < 0.05);
  for (std::size_t i = 0; i < rs.size(); ++i) CHECK(p.kernel[i] == doctest::Approx(boost::math::cyl_bessel_j(0, rs[i])));

  const std::vector<double> at_pi{pi};
  const CovarianceProfile p3 = empirical_covariance({SamplerKind::PlaneWave, 3, 256, 16}, 4000, at_pi, 22, opts);
  CHECK(std::fabs(p3.estimate[0]) < 0.05);
  CHECK_THROWS_AS(empirical_covariance({SamplerKind::PlaneWave, 2, 256, 16}, 50, rs, 1, opts), PreconditionError);
}

TEST_CASE("bessel-fourier radial wave and zero field") {
  const BesselFourierFunction j0 = radial_wave(2);
  const std::vector<double> x{std::cos(0.3), std::sin(0.3)};
  CHECK(j0.value(x) == doctest::Approx(0.7651976865579666).epsilon(1e-13));
  const BesselFourierFunction s3 = radial_wave(3);
  const std::vector<double> y{0.0, 0.6, 0.8};
  CHECK(s3.value(y) == doctest::Approx(std::sin(1.0)).epsilon(1e-13));

  const BesselFourierFunction zero(2, 4, std::vector<double>(bessel_fourier_size(2, 4), 0.0));
  const std::vector<Point> pts = random_points(2, 5.0, 5, 3);
  const DerivativeTable t = eval_bessel_fourier(zero, pts, 4);
  for (double v : t.data) CHECK(v == 0.0);

  const std::vector<Point> far{Point{10.5, 0.0, 0.0}};
  CHECK_THROWS_AS(eval_bessel_fourier(j0, far, 0), DomainError);
}

TEST_CASE("bessel-fourier degree zero in three dimensions is rotation invariant") {
  const BesselFourierFunction f = sample_bessel_fourier(3, 0, 17);
  REQUIRE(f.coefficients().size() == 1);
  const double r = 2.3;
  const double expected = f.coefficients()[0] * std::sqrt(2 / pi) / std::sqrt(4 * pi) * std::sin(r) / r;
  for (const auto& dir : {std::vector<double>{r, 0, 0}, std::vector<double>{0, 0, -r},
                          std::vector<double>{r / std::sqrt(3.0), r / std::sqrt(3.0), r / std::sqrt(3.0)}}) {
    CHECK(f.value(dir) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("bessel-fourier samples solve the Helmholtz equation") {
  for (int d : {2, 3}) {
    const BesselFourierFunction f = sample_bessel_fourier(d, 16, 4);
    const DerivativeTable t = eval_bessel_fourier(f, random_points(d, 9.0, 10, 5), 2);
    for (std::size_t i = 0; i < t.points.size(); ++i) CHECK(std::fabs(laplacian_plus_value(t, i)) < 1e-9);
  }
}

TEST_CASE("bessel-fourier variance calibration") {
  // Pointwise variance sigma^2 sum_lm (mode_lm(x))^2 must reproduce K(0) = 1
  // up to the degree truncation; the d = 2 oracle is J0^2 + 2 sum J_l^2 = 1.
  for (int d : {2, 3}) {
    const int cap = 16;
    const int count = static_cast<int>(bessel_fourier_size(d, cap));
    for (double r : {0.0, 1.5, 4.0}) {
      std::vector<double> x(static_cast<std::size_t>(d), 0.0);
      x[0] = r * 0.6;
      x[1] = r * 0.8;
      double var = 0.0;
      for (int i = 0; i < count; ++i) {
        std::vector<double> c(static_cast<std::size_t>(count), 0.0);
        c[static_cast<std::size_t>(i)] = 1.0;
        const BesselFourierFunction mode(d, cap, c);
        var += mode.value(x) * mode.value(x);
      }
      var *= bessel_fourier_variance(d);
      CHECK(var == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  double neumann = boost::math::cyl_bessel_j(0, 4.0) * boost::math::cyl_bessel_j(0, 4.0);
  for (int l = 1; l <= 16; ++l) neumann += 2 * std::pow(boost::math::cyl_bessel_j(l, 4.0), 2);
  CHECK(neumann == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("jacobi-anger expansion reproduces the plane wave") {
  const Point dir{0.6, 0.8, 0.0};
  const BesselFourierFunction f = plane_wave_expansion(2, dir, 0.4, 1.3, 24);
  for (const Point& x : random_points(2, 3.0, 20, 8)) {
    const std::vector<double> y{x[0], x[1]};
    CHECK(f.value(y) == doctest::Approx(1.3 * std::cos(0.6 * x[0] + 0.8 * x[1] + 0.4)).epsilon(1e-10));
  }
}

TEST_CASE("sampler marginals are standard normal and agree") {
  const SamplerSpec pw{SamplerKind::PlaneWave, 2, 256, 16};
  const SamplerSpec bf{SamplerKind::BesselFourier, 2, 256, 16};
  const std::vector<Point> probes{Point{}, Point{0.7, -0.2, 0.0}, Point{-1.5, 2.0, 0.0}};
  for (std::size_t j = 0; j < probes.size(); ++j) {
    std::vector<double> a;
    std::vector<double> b;
    const std::vector<double> y{probes[j][0], probes[j][1]};
    for (std::uint64_t i = 0; i < 2000; ++i) {
      a.push_back(draw_berry(pw, 100 + j, i)->value(y));
      b.push_back(draw_berry(bf, 200 + j, i)->value(y));
    }
    if (j == 0) {
      CHECK(ks_test_normal(a).p_value > 0.01);
      CHECK(ks_test_normal(b).p_value > 0.01);
      const MeanEstimate m = estimate_mean(b, 0.99);
      double var = 0.0;
      for (double v : b) var += v * v;
      CHECK(var / 2000 == doctest::Approx(1.0).epsilon(0.1));
      CHECK(std::fabs(m.mean) < m.radius + 1e-12);
    }
    CHECK(ks_two_sample(a, b).p_value > 0.01);
  }
}

TEST_CASE("sampler draws replay exactly") {
  const SamplerSpec bf{SamplerKind::BesselFourier, 3, 256, 8};
  const std::vector<double> y{0.3, 0.1, -0.5};
  CHECK(draw_berry(bf, 42, 7)->value(y) == draw_berry(bf, 42, 7)->value(y));
  CHECK(draw_berry(bf, 42, 7)->value(y) != draw_berry(bf, 42, 8)->value(y));
}

TEST_CASE("covariance is isotropic and stationary within confidence") {
  const std::vector<double> rs{1.0, 2.0};
  CovarianceOptions a;
  a.direction = Point{1.0, 0.0, 0.0};
  a.base = Point{};
  CovarianceOptions b;
  b.direction = Point{0.0, 1.0, 0.0};
  b.base = Point{3.0, -2.0, 0.0};
  const SamplerSpec spec{SamplerKind::PlaneWave, 2, 256, 16};
  const CovarianceProfile pa = empirical_covariance(spec, 2000, rs, 31, a);
  const CovarianceProfile pb = empirical_covariance(spec, 2000, rs, 32, b);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    CHECK(std::fabs(pa.estimate[i] - pb.estimate[i]) < pa.radius[i] + pb.radius[i]);
  }
}
