#include <cmath>
#include <memory>
#include <vector>

#include "berrylab/berry_field.hpp"
#include "berrylab/errors.hpp"
#include "berrylab/functionals.hpp"
#include "doctest.h"

using namespace berrylab;

namespace {

GridSpec ball(int resolution, int order) {
  GridSpec g;
  g.dimension = 2;
  g.resolution = resolution;
  g.order = order;
  return g;
}

SourcePtr expression(std::function<Jet(std::span<const Jet>)> body) {
  return std::make_shared<JetFunction>(2, std::move(body), "expr");
}

}  // namespace

TEST_CASE("chi cutoff") {
  const double eps = 0.4;
  CHECK(chi(eps / 4, eps) == 1.0);
  CHECK(chi(eps / 2, eps) == 1.0);
  CHECK(chi(2 * eps, eps) == 0.0);
  CHECK(chi(eps, eps) == 0.0);
  const double mid = chi(0.75 * eps, eps);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  double prev = 1.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = chi(i * 0.015, eps);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK_THROWS_AS(chi(0.1, 0.0), DomainError);
  CHECK_THROWS_AS(chi(-0.1, 1.0), DomainError);
}

TEST_CASE("functional application") {
  const GridSpec g = ball(33, 1);
  const auto wave = std::make_shared<CosineSum>(2, std::vector<CosineTerm>{{Point{0.6, 0.8, 0.0}, std::sqrt(2.0), 0.0}}, "w");
  const LocalizedField f = sample(*wave, g);

  FunctionalSpec moment;
  moment.kind = FunctionalKind::Moment;
  moment.points = {Point{}};
  moment.power = 2;
  CHECK(apply(moment, f)[0] == doctest::Approx(2.0).epsilon(1e-14));

  FunctionalSpec chi_self;
  chi_self.kind = FunctionalKind::ChiNorm;
  chi_self.target = wave;
  chi_self.order = 1;
  chi_self.epsilon = 0.3;
  CHECK(apply(chi_self, f)[0] == 1.0);

  FunctionalSpec point;
  point.kind = FunctionalKind::PointEval;
  point.points = {Point{}, Point{0.5, 0.0, 0.0}};
  const LocalizedField zero = sample(*expression([](std::span<const Jet> y) { return Jet(y[0].table()); }), g);
  const auto values = apply(point, zero);
  REQUIRE(values.size() == 2);
  CHECK(values[0] == 0.0);
  CHECK(values[1] == 0.0);

  FunctionalSpec pair;
  pair.kind = FunctionalKind::PairProduct;
  pair.points = {Point{}, Point{0.5, 0.0, 0.0}};
  CHECK(apply(pair, f)[0] == doctest::Approx(2.0 * std::cos(0.3)).epsilon(1e-13));
}

TEST_CASE("chi-norm needs derivative depth") {
  FunctionalSpec spec;
  spec.kind = FunctionalKind::ChiNorm;
  spec.target = std::make_shared<BesselFourierFunction>(radial_wave(2));
  spec.order = 2;
  const LocalizedField f = sample(*spec.target, ball(17, 1));
  CHECK_THROWS(apply(spec, f));
  spec.epsilon = -1.0;
  CHECK_THROWS_AS(validate_functional(spec), DomainError);
}

TEST_CASE("chi-norm is lipschitz under perturbation") {
  const GridSpec g = ball(33, 1);
  const auto target = std::make_shared<BesselFourierFunction>(radial_wave(2));
  FunctionalSpec spec;
  spec.kind = FunctionalKind::ChiNorm;
  spec.target = target;
  spec.order = 1;
  spec.epsilon = 1.0;
  const PreparedFunctional F(spec, g);
  const auto base = draw_berry({SamplerKind::BesselFourier, 2, 256, 16}, 4, 0);
  const auto mixed = std::make_shared<SumField>(std::make_shared<ScaledField>(base, 0.3), target);
  const double v0 = F.apply(sample(*mixed, g))[0];
  // Lipschitz constant of chi on a 200-point grid bounds the slope.
  double lip = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double t = i / 200.0;
    lip = std::max(lip, std::fabs(chi(t + 0.005, 1.0) - chi(t, 1.0)) / 0.005);
  }
  lip *= 1.05;
  for (double delta : {1e-3, 1e-2, 5e-2}) {
    const auto bump = std::make_shared<CosineSum>(2, std::vector<CosineTerm>{{Point{1.0, 0.0, 0.0}, delta, 0.0}}, "b");
    const LocalizedField p = sample(*std::make_shared<SumField>(mixed, bump), g);
    const double change = std::fabs(F.apply(p)[0] - v0);
    CHECK(change <= lip * cr_norm(sample(*bump, g), 1, 1.0) + 1e-14);
  }
}

TEST_CASE("declared bounds hold on sampler draws") {
  const GridSpec g = ball(17, 1);
  const auto target = std::make_shared<BesselFourierFunction>(radial_wave(2));
  std::vector<FunctionalSpec> specs(5);
  specs[0].kind = FunctionalKind::PointEval;
  specs[0].points = {Point{}, Point{0.25, 0.5, 0.0}};
  specs[1].kind = FunctionalKind::Moment;
  specs[1].points = {Point{}};
  specs[1].power = 4;
  specs[2].kind = FunctionalKind::PairProduct;
  specs[2].points = {Point{}, Point{0.5, 0.0, 0.0}};
  specs[3].kind = FunctionalKind::ChiNorm;
  specs[3].target = target;
  specs[4].kind = FunctionalKind::NodalCount;
  std::vector<PreparedFunctional> prepared;
  for (const auto& s : specs) prepared.emplace_back(s, g);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const LocalizedField f = sample(*draw_berry({SamplerKind::PlaneWave, 2, 64, 16}, 6, i), g);
    for (const auto& F : prepared) {
      for (double v : F.apply(f)) CHECK(std::fabs(v) <= F.bound());
    }
  }
}

TEST_CASE("nodal component counts") {
  const GridSpec g = ball(65, 0);
  const auto y1 = sample(*expression([](std::span<const Jet> y) { return y[0]; }), g);
  NodalCounts c = nodal_component_count(y1);
  CHECK(c.positive == 1);
  CHECK(c.negative == 1);

  const auto stripes = expression([](std::span<const Jet> y) { return cos(3.0 * y[0]); });
  c = nodal_component_count(sample(*stripes, g));
  CHECK(c.positive == 1);
  CHECK(c.negative == 2);
  const NodalCounts fine = nodal_component_count(sample(*stripes, ball(129, 0)));
  CHECK(fine.positive == c.positive);
  CHECK(fine.negative == c.negative);

  const auto flipped = expression([](std::span<const Jet> y) { return -cos(3.0 * y[0]); });
  const NodalCounts f = nodal_component_count(sample(*flipped, g));
  CHECK(f.positive == 2);
  CHECK(f.negative == 1);

  const auto positive = expression([](std::span<const Jet> y) { return Jet(y[0].table(), 2.0); });
  c = nodal_component_count(sample(*positive, g));
  CHECK(c.positive == 1);
  CHECK(c.negative == 0);
  CHECK(nodal_component_count(sample(*positive, g), 3.0).negative == 1);
}

TEST_CASE("nodal counts of J0 stabilise under refinement") {
  // Zeros of J0 at 2.405 and 5.520 split the radius 6 disk into a positive
  // core, a negative annulus and a positive rim.
  const auto field = std::make_shared<BesselFourierFunction>(radial_wave(2));
  GridSpec coarse = ball(65, 0);
  coarse.radius = 6.0;
  GridSpec fine = coarse;
  fine.resolution = 129;
  for (const GridSpec& g : {coarse, fine}) {
    const NodalCounts c = nodal_component_count(sample(*field, g));
    CHECK(c.positive == 2);
    CHECK(c.negative == 1);
  }
}
