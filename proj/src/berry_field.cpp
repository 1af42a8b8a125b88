#include "berrylab/berry_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "berrylab/errors.hpp"
#include "berrylab/parallel.hpp"
#include "berrylab/stats.hpp"

namespace berrylab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dimension(int d) {
  if (d != 2 && d != 3) throw DomainError("dimension must be 2 or 3, got " + std::to_string(d));
}

}  // namespace

Point random_direction(int dimension, Engine& engine) {
  std::normal_distribution<double> normal;
  for (;;) {
    Point p{};
    double n2 = 0.0;
    for (int i = 0; i < dimension; ++i) {
      p[static_cast<std::size_t>(i)] = normal(engine);
      n2 += p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
    }
    if (n2 < 1e-24) continue;
    const double inv = 1.0 / std::sqrt(n2);
    for (int i = 0; i < dimension; ++i) p[static_cast<std::size_t>(i)] *= inv;
    return p;
  }
}

Point random_in_ball(int dimension, double radius, Engine& engine) {
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (;;) {
    Point p{};
    double n2 = 0.0;
    for (int i = 0; i < dimension; ++i) {
      p[static_cast<std::size_t>(i)] = uniform(engine);
      n2 += p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
    }
    if (n2 > 1.0) continue;
    for (int i = 0; i < dimension; ++i) p[static_cast<std::size_t>(i)] *= radius;
    return p;
  }
}

PlaneWaveEnsemble sample_plane_wave(int dimension, int count, std::uint64_t seed) {
  require_dimension(dimension);
  if (count < 1) throw DomainError("plane-wave ensemble needs K >= 1");
  PlaneWaveEnsemble ens;
  ens.dimension = dimension;
  ens.seed = seed;
  Engine engine = make_engine(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  for (int k = 0; k < count; ++k) {
    ens.directions.push_back(random_direction(dimension, engine));
    ens.phases.push_back(phase(engine));
  }
  return ens;
}

std::shared_ptr<const CosineSum> plane_wave_field(const PlaneWaveEnsemble& ensemble) {
  if (ensemble.directions.empty() || ensemble.directions.size() != ensemble.phases.size()) {
    throw DomainError("malformed plane-wave ensemble");
  }
  const double amplitude = std::sqrt(2.0 / static_cast<double>(ensemble.count()));
  std::vector<CosineTerm> terms;
  terms.reserve(ensemble.count());
  for (std::size_t k = 0; k < ensemble.count(); ++k) {
    terms.push_back({ensemble.directions[k], amplitude, ensemble.phases[k]});
  }
  std::ostringstream os;
  os << "plane-wave:K=" << ensemble.count() << ":seed=" << ensemble.seed;
  return std::make_shared<CosineSum>(ensemble.dimension, std::move(terms), os.str());
}

DerivativeTable eval_plane_wave(const PlaneWaveEnsemble& ensemble, std::span<const Point> points, int order) {
  return evaluate_points(*plane_wave_field(ensemble), points, order);
}

BesselFourierFunction::BesselFourierFunction(int dimension, int degree_cap, std::vector<double> coefficients,
                                             std::string provenance)
    : dimension_(dimension), degree_cap_(degree_cap), coefficients_(std::move(coefficients)),
      provenance_(std::move(provenance)) {
  require_dimension(dimension);
  if (degree_cap < 0) throw DomainError("degree cap must be nonnegative");
  if (coefficients_.size() != bessel_fourier_size(dimension, degree_cap)) {
    throw DomainError("coefficient table must cover every (l, m) with l <= L");
  }
  for (double c : coefficients_) {
    if (!std::isfinite(c)) throw DomainError("Bessel-Fourier coefficients must be finite");
  }
  harmonics_ = std::make_shared<SolidHarmonics>(dimension, degree_cap);
}

double BesselFourierFunction::coefficient(const HarmonicIndex& idx) const {
  if (idx.dimension != dimension_ || idx.degree > degree_cap_ || idx.degree < 0) {
    throw DomainError("harmonic index outside the coefficient table");
  }
  if (idx.order < 1 || idx.order > harmonic_multiplicity(dimension_, idx.degree)) {
    throw DomainError("harmonic order outside the degree");
  }
  return coefficients_[harmonics_->offset(idx.degree) + static_cast<std::size_t>(idx.order - 1)];
}

Jet BesselFourierFunction::evaluate(std::span<const double> point, int order) const {
  check_in_domain(*this, point);
  const MultiIndexTable& table = MultiIndexTable::get(dimension_, order);
  const std::vector<Jet> y = coordinate_jets(table, point);
  Jet s(table);
  for (const Jet& c : y) s.add_product(c, c);
  std::vector<Jet> h;
  harmonics_->evaluate(y, h);
  const double lambda = (dimension_ - 2) / 2.0;
  Jet out(table);
  std::vector<double> radial(static_cast<std::size_t>(order + 1));
  for (int l = 0; l <= degree_cap_; ++l) {
    const std::size_t begin = harmonics_->offset(l);
    const std::size_t end = harmonics_->offset(l + 1);
    Jet angular(table);
    bool any = false;
    for (std::size_t i = begin; i < end; ++i) {
      if (coefficients_[i] == 0.0) continue;
      angular.add_scaled(h[i], coefficients_[i]);
      any = true;
    }
    if (!any) continue;
    for (int j = 0; j <= order; ++j) {
      radial[static_cast<std::size_t>(j)] = bessel_radial(l + lambda, s.value(), j);
    }
    out.add_product(compose(radial, s), angular);
  }
  return out;
}

double BesselFourierFunction::value(std::span<const double> point) const {
  check_in_domain(*this, point);
  double s = 0.0;
  for (double v : point) s += v * v;
  std::vector<double> h;
  harmonics_->evaluate_values(point, h);
  const double lambda = (dimension_ - 2) / 2.0;
  double out = 0.0;
  for (int l = 0; l <= degree_cap_; ++l) {
    double angular = 0.0;
    for (std::size_t i = harmonics_->offset(l); i < harmonics_->offset(l + 1); ++i) angular += coefficients_[i] * h[i];
    if (angular != 0.0) out += bessel_radial(l + lambda, s, 0) * angular;
  }
  return out;
}

double bessel_fourier_variance(int dimension) {
  require_dimension(dimension);
  return dimension == 2 ? 2.0 * kPi : 2.0 * kPi * kPi;
}

std::size_t bessel_fourier_size(int dimension, int degree_cap) {
  require_dimension(dimension);
  if (degree_cap < 0) throw DomainError("degree cap must be nonnegative");
  if (dimension == 2) return static_cast<std::size_t>(2 * degree_cap + 1);
  return static_cast<std::size_t>((degree_cap + 1) * (degree_cap + 1));
}

BesselFourierFunction sample_bessel_fourier(int dimension, int degree_cap, std::uint64_t seed) {
  const std::size_t n = bessel_fourier_size(dimension, degree_cap);
  Engine engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(bessel_fourier_variance(dimension)));
  std::vector<double> c(n);
  for (double& v : c) v = normal(engine);
  std::ostringstream os;
  os << "bessel-fourier:L=" << degree_cap << ":seed=" << seed;
  return BesselFourierFunction(dimension, degree_cap, std::move(c), os.str());
}

DerivativeTable eval_bessel_fourier(const BesselFourierFunction& f, std::span<const Point> points, int order) {
  return evaluate_points(f, points, order);
}

BesselFourierFunction radial_wave(int dimension, double scale) {
  require_dimension(dimension);
  std::vector<double> c(1, scale * std::sqrt(bessel_fourier_variance(dimension)));
  return BesselFourierFunction(dimension, 0, std::move(c), dimension == 2 ? "radial-wave:J0" : "radial-wave:sinc");
}

BesselFourierFunction harmonic_wave(const HarmonicIndex& idx, double coefficient) {
  const int mult = harmonic_multiplicity(idx.dimension, idx.degree);
  if (idx.order < 1 || idx.order > mult) throw DomainError("harmonic order outside the degree");
  std::vector<double> c(bessel_fourier_size(idx.dimension, idx.degree), 0.0);
  SolidHarmonics h(idx.dimension, idx.degree);
  c[h.offset(idx.degree) + static_cast<std::size_t>(idx.order - 1)] = coefficient;
  std::ostringstream os;
  os << "harmonic-wave:l=" << idx.degree << ":m=" << idx.order;
  return BesselFourierFunction(idx.dimension, idx.degree, std::move(c), os.str());
}

BesselFourierFunction plane_wave_expansion(int dimension, const Point& direction, double phase, double amplitude,
                                           int degree_cap) {
  require_dimension(dimension);
  std::vector<double> c(bessel_fourier_size(dimension, degree_cap), 0.0);
  if (dimension == 2) {
    const double alpha = std::atan2(direction[1], direction[0]);
    c[0] = amplitude * std::sqrt(2.0 * kPi) * std::cos(phase);
    for (int n = 1; n <= degree_cap; ++n) {
      const double a = amplitude * 2.0 * std::sqrt(kPi) * std::cos(phase + n * kPi / 2.0);
      c[static_cast<std::size_t>(2 * n - 1)] = a * std::cos(n * alpha);
      c[static_cast<std::size_t>(2 * n)] = a * std::sin(n * alpha);
    }
  } else {
    const double n = std::hypot(direction[0], direction[1], direction[2]);
    const std::array<double, 3> theta{direction[0] / n, direction[1] / n, direction[2] / n};
    std::size_t o = 0;
    for (int l = 0; l <= degree_cap; ++l) {
      SphereHarmonicDegree deg(l);
      std::vector<double> y;
      deg.evaluate_values(theta, y);
      const double a = amplitude * 4.0 * kPi * std::sqrt(kPi / 2.0) * std::cos(phase + l * kPi / 2.0);
      for (double v : y) c[o++] = a * v;
    }
  }
  return BesselFourierFunction(dimension, degree_cap, std::move(c), "plane-wave-expansion");
}

const char* sampler_name(SamplerKind kind) {
  return kind == SamplerKind::PlaneWave ? "plane-wave" : "bessel-fourier";
}

SourcePtr draw_berry(const SamplerSpec& spec, std::uint64_t master_seed, std::uint64_t index) {
  const std::uint64_t seed = derive_seed(master_seed, {stream::kBerry, index});
  if (spec.kind == SamplerKind::PlaneWave) {
    return plane_wave_field(sample_plane_wave(spec.dimension, spec.directions, seed));
  }
  return std::make_shared<BesselFourierFunction>(sample_bessel_fourier(spec.dimension, spec.degree_cap, seed));
}

double clip_value(double v) { return std::clamp(v, -kClip, kClip); }

double CovarianceProfile::sup_deviation() const {
  double sup = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) sup = std::max(sup, std::fabs(estimate[i] - kernel[i]));
  return sup;
}

CovarianceProfile empirical_covariance(const SamplerSpec& spec, std::size_t samples,
                                       std::span<const double> separations, std::uint64_t seed,
                                       const CovarianceOptions& options) {
  if (samples < 100) throw PreconditionError("empirical covariance needs M >= 100 samples");
  if (separations.empty()) throw PreconditionError("empirical covariance needs separations");
  if (options.pairs < 1) throw PreconditionError("empirical covariance needs at least one pair per sample");
  const int d = spec.dimension;
  require_dimension(d);
  const std::size_t nr = separations.size();
  std::vector<double> products(samples * nr);
  parallel_for(samples, options.threads, [&](std::size_t i) {
    const SourcePtr field = draw_berry(spec, seed, i);
    Engine engine = make_engine(derive_seed(seed, {stream::kPairs, i}));
    std::vector<double> acc(nr, 0.0);
    for (int p = 0; p < options.pairs; ++p) {
      const Point x = options.base ? *options.base : random_in_ball(d, options.base_radius, engine);
      const Point e = options.direction ? *options.direction : random_direction(d, engine);
      const std::span<const double> xs(x.data(), static_cast<std::size_t>(d));
      const double fx = clip_value(field->value(xs));
      for (std::size_t k = 0; k < nr; ++k) {
        Point y = x;
        for (int a = 0; a < d; ++a) y[static_cast<std::size_t>(a)] += separations[k] * e[static_cast<std::size_t>(a)];
        acc[k] += fx * clip_value(field->value(std::span<const double>(y.data(), static_cast<std::size_t>(d))));
      }
    }
    for (std::size_t k = 0; k < nr; ++k) products[i * nr + k] = acc[k] / options.pairs;
  });
  CovarianceProfile out;
  out.samples = samples;
  std::vector<double> column(samples);
  for (std::size_t k = 0; k < nr; ++k) {
    for (std::size_t i = 0; i < samples; ++i) column[i] = products[i * nr + k];
    const MeanEstimate e = estimate_mean(column, options.confidence);
    out.separations.push_back(separations[k]);
    out.estimate.push_back(e.mean);
    out.radius.push_back(e.radius);
    out.kernel.push_back(berry_kernel(d, separations[k]));
  }
  return out;
}

}  // namespace berrylab
