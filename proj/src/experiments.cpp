#include "berrylab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "berrylab/errors.hpp"
#include "berrylab/parallel.hpp"
#include "berrylab/special_functions.hpp"

namespace berrylab {

namespace {

std::string lambda_label(double lambda) {
  std::ostringstream os;
  os.precision(17);
  os << "lambda=" << lambda;
  return os.str();
}

void require_count(std::size_t have, std::size_t need, const char* what) {
  if (have < need) {
    throw PreconditionError(std::string(what) + " needs at least " + std::to_string(need) + " samples, got " +
                            std::to_string(have));
  }
}

void require_monte_carlo(const SamplingSpec& s, const char* what) {
  if (s.policy != BasePolicy::MonteCarlo) {
    throw PreconditionError(std::string(what) + " needs Monte Carlo base points");
  }
}

/// Functionals that read point values only need those points.
GridSpec functional_grid(const FunctionalSpec& F, const GridSpec& grid) {
  GridSpec g = grid;
  g.order = std::max(g.order, required_order(F));
  if (F.kind == FunctionalKind::PointEval || F.kind == FunctionalKind::Moment ||
      F.kind == FunctionalKind::PairProduct) {
    g.layout = GridLayout::Points;
    g.points = F.points;
    g.order = 0;
  }
  return g;
}

double grid_extent(const GridSpec& grid) {
  if (grid.layout == GridLayout::Ball) return grid.radius;
  double r = 0.0;
  for (const Point& p : grid.points) r = std::max(r, std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
  return r;
}

std::vector<MeanEstimate> estimate_outputs(const FunctionalSamples& s, double confidence, int chart) {
  std::vector<MeanEstimate> out;
  for (const auto& row : s.values) {
    if (chart < 0) {
      out.push_back(weighted_estimate(row, s.weights, confidence));
      continue;
    }
    std::vector<double> v;
    std::vector<double> w;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (s.charts[i] != chart) continue;
      v.push_back(row[i]);
      w.push_back(s.weights[i]);
    }
    if (v.empty()) {
      out.push_back(MeanEstimate{});
      continue;
    }
    out.push_back(weighted_estimate(v, w, confidence));
  }
  return out;
}

struct Members {
  std::vector<EigenvalueEntry> entries;
  std::vector<std::shared_ptr<const Eigenfunction>> psis;
};

Members build_members(const EigenfunctionSequenceSpec& seq, double extent) {
  Members m;
  m.entries = resolve_eigenvalues(seq);
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    auto psi = std::make_shared<const Eigenfunction>(sequence_member(seq, m.entries[i], i));
    check_localization_domain(*psi, extent);
    m.psis.push_back(std::move(psi));
  }
  return m;
}

/// Values of the real eigenspace basis at the localized nodes: rows nodes, columns modes.
Eigen::MatrixXd basis_values(const ManifoldSpec& manifold, const EigenvalueEntry& entry, const BasePoint& p,
                             const LocalizedField& nodes_field) {
  const std::size_t n = nodes_field.node_count();
  const int m = entry.multiplicity;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(n), m);
  const double scale = 1.0 / std::sqrt(entry.lambda);
  const int d = manifold.dimension();
  if (manifold.kind == ManifoldKind::Torus) {
    for (std::size_t j = 0; j < entry.modes.size(); ++j) {
      std::vector<double> c(static_cast<std::size_t>(m), 0.0);
      c[2 * j] = 1.0;
      const Eigenfunction cos_mode = Eigenfunction::raw(manifold, entry, c);
      const std::vector<CosineTerm> terms = cos_mode.torus_terms(p, scale);
      const CosineTerm& t = terms.front();
      for (std::size_t i = 0; i < n; ++i) {
        double arg = t.phase;
        for (int a = 0; a < d; ++a) arg += t.frequency[static_cast<std::size_t>(a)] * nodes_field.node(i)[static_cast<std::size_t>(a)];
        A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(2 * j)) = t.amplitude * std::cos(arg);
        A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(2 * j + 1)) = t.amplitude * std::sin(arg);
      }
    }
    return A;
  }
  const SphereHarmonicDegree h(entry.degree);
  const double norm = std::sqrt(4.0 * std::numbers::pi);
  std::vector<double> values;
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<Jet> omega =
        sphere_exp_jets(p, std::span<const double>(nodes_field.node(i).data(), 2), 0, scale);
    const std::array<double, 3> w{omega[0].value(), omega[1].value(), omega[2].value()};
    h.evaluate_values(w, values);
    for (int j = 0; j < m; ++j) A(static_cast<Eigen::Index>(i), j) = norm * values[static_cast<std::size_t>(j)];
  }
  return A;
}

}  // namespace

std::vector<EigenvalueEntry> resolve_eigenvalues(const EigenfunctionSequenceSpec& seq) {
  std::vector<EigenvalueEntry> out;
  if (!seq.eigenvalues.empty()) {
    for (double lambda : seq.eigenvalues) out.push_back(eigenspace(seq.manifold, lambda));
  } else if (seq.max_eigenvalue > 0.0) {
    out = eigenvalues_up_to(seq.manifold, seq.max_eigenvalue);
  }
  if (out.empty()) throw PreconditionError("eigenvalue selection is empty");
  return out;
}

Eigenfunction sequence_member(const EigenfunctionSequenceSpec& seq, const EigenvalueEntry& entry, std::size_t index) {
  std::vector<double> c(static_cast<std::size_t>(entry.multiplicity), 0.0);
  if (seq.rule == CoefficientRule::Deterministic) {
    if (seq.mode_index < 0 || seq.mode_index >= entry.multiplicity) {
      throw PreconditionError("mode_index " + std::to_string(seq.mode_index) + " outside the eigenspace of " +
                              lambda_label(entry.lambda));
    }
    c[static_cast<std::size_t>(seq.mode_index)] = 1.0;
  } else {
    Engine engine = make_engine(derive_seed(seq.coefficient_seed, {stream::kCoefficients, index}));
    std::normal_distribution<double> normal;
    for (double& v : c) v = normal(engine);
  }
  return Eigenfunction::make(seq.manifold, entry, std::move(c));
}

Population localization_population(std::shared_ptr<const Eigenfunction> psi, const SamplingSpec& sampling,
                                   std::uint64_t seed, std::size_t lambda_index) {
  Population pop;
  const ManifoldSpec spec = psi->manifold();
  pop.label = lambda_label(psi->lambda());
  pop.lambda = psi->lambda();
  pop.multiplicity = psi->entry().multiplicity;
  if (sampling.chart < 0) {
    for (const Chart& c : chart_cover(spec)) pop.charts.push_back(c.id);
  } else {
    if (sampling.chart >= static_cast<int>(chart_cover(spec).size())) throw DomainError("chart index out of range");
    pop.charts.push_back(sampling.chart);
  }
  if (sampling.policy == BasePolicy::Quadrature) {
    auto points = std::make_shared<std::vector<WeightedBasePoint>>(
        quadrature_base_points(spec, sampling.chart, sampling.quadrature_nodes));
    pop.size = points->size();
    pop.quadrature = true;
    pop.draw = [psi, points](std::size_t i) {
      const WeightedBasePoint& w = (*points)[i];
      return Draw{std::make_shared<LocalizedEigenfunction>(psi, w.point), w.weight, w.point.chart};
    };
    return pop;
  }
  pop.size = sampling.base_points;
  const int chart = sampling.chart;
  pop.draw = [psi, spec, chart, seed, lambda_index](std::size_t i) {
    Engine engine = make_engine(derive_seed(seed, {stream::kBasePoints, lambda_index, i}));
    const BasePoint p = random_base_point(spec, chart, engine);
    return Draw{std::make_shared<LocalizedEigenfunction>(psi, p), 1.0, p.chart};
  };
  return pop;
}

Population berry_population(const SamplerSpec& sampler, std::size_t count, std::uint64_t seed) {
  Population pop;
  pop.label = std::string("berry:") + sampler_name(sampler.kind);
  pop.size = count;
  pop.charts = {0};
  pop.draw = [sampler, seed](std::size_t i) { return Draw{draw_berry(sampler, seed, i), 1.0, 0}; };
  return pop;
}

MeanEstimate weighted_estimate(std::span<const double> values, std::span<const double> weights, double confidence) {
  if (values.size() != weights.size() || values.empty()) throw PreconditionError("weighted estimate needs data");
  const bool unit = std::all_of(weights.begin(), weights.end(), [](double w) { return w == 1.0; });
  if (unit) return estimate_mean(values, confidence);
  double sw = 0.0;
  double swv = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sw += weights[i];
    swv += weights[i] * values[i];
  }
  MeanEstimate e;
  e.mean = swv / sw;
  e.count = values.size();
  return e;
}

FunctionalSamples apply_population(const Population& pop, const PreparedFunctional& F, const GridSpec& grid,
                                   int threads) {
  FunctionalSamples s;
  const std::size_t outputs = F.output_size();
  s.values.assign(outputs, std::vector<double>(pop.size));
  s.weights.assign(pop.size, 0.0);
  s.charts.assign(pop.size, 0);
  parallel_for(pop.size, threads, [&](std::size_t i) {
    const Draw d = pop.draw(i);
    const LocalizedField f = sample(*d.field, grid);
    const std::vector<double> v = F.apply(f);
    for (std::size_t k = 0; k < outputs; ++k) s.values[k][i] = v[k];
    s.weights[i] = d.weight;
    s.charts[i] = d.chart;
  });
  return s;
}

std::vector<MeanEstimate> berry_reference(const FunctionalSpec& F, const SamplerSpec& sampler, std::size_t samples,
                                          const GridSpec& grid, std::uint64_t seed, const RunOptions& options) {
  require_count(samples, 100, "Berry reference");
  const GridSpec g = functional_grid(F, grid);
  const PreparedFunctional prepared(F, g);
  const FunctionalSamples s = apply_population(berry_population(sampler, samples, seed), prepared, g, options.threads);
  return estimate_outputs(s, options.confidence, -1);
}

BerryExpectationResult berry_expectation_test(const EigenfunctionSequenceSpec& seq, const FunctionalSpec& F,
                                              const SamplingSpec& sampling, const SamplerSpec& sampler,
                                              std::size_t berry_samples, const GridSpec& grid, std::uint64_t seed,
                                              const RunOptions& options) {
  if (sampling.policy == BasePolicy::MonteCarlo) require_count(sampling.base_points, 100, "berry-expectation-test");
  require_count(berry_samples, 100, "berry-expectation-test Berry side");
  if (sampler.dimension != seq.manifold.dimension()) throw PreconditionError("sampler and manifold dimensions differ");
  const GridSpec g = functional_grid(F, grid);
  const Members members = build_members(seq, grid_extent(g));
  const PreparedFunctional prepared(F, g);
  BerryExpectationResult result;
  result.outputs = prepared.output_names();
  result.functional = prepared.describe();
  result.berry = berry_reference(F, sampler, berry_samples, grid, seed, options);
  for (std::size_t li = 0; li < members.psis.size(); ++li) {
    const Population pop = localization_population(members.psis[li], sampling, seed, li);
    const FunctionalSamples s = apply_population(pop, prepared, g, options.threads);
    LambdaEstimate row;
    row.lambda = pop.lambda;
    row.multiplicity = pop.multiplicity;
    row.pooled = estimate_outputs(s, options.confidence, -1);
    for (int c : pop.charts) row.charts.push_back({c, estimate_outputs(s, options.confidence, c)});
    for (std::size_t k = 0; k < row.pooled.size(); ++k) {
      row.gap.push_back(difference(row.pooled[k], result.berry[k], options.confidence));
    }
    result.lambdas.push_back(std::move(row));
  }
  return result;
}

BerryExpectationResult berry_self_consistency(const FunctionalSpec& F, const SamplerSpec& sampler,
                                              std::size_t samples, const GridSpec& grid, std::uint64_t seed,
                                              const RunOptions& options) {
  const GridSpec g = functional_grid(F, grid);
  const PreparedFunctional prepared(F, g);
  BerryExpectationResult result;
  result.outputs = prepared.output_names();
  result.functional = prepared.describe();
  result.berry = berry_reference(F, sampler, samples, grid, seed, options);
  LambdaEstimate row;
  row.pooled = berry_reference(F, sampler, samples, grid, derive_seed(seed, {stream::kBerry, ~std::uint64_t{0}}),
                               options);
  row.charts.push_back({0, row.pooled});
  for (std::size_t k = 0; k < row.pooled.size(); ++k) {
    row.gap.push_back(difference(row.pooled[k], result.berry[k], options.confidence));
  }
  result.lambdas.push_back(std::move(row));
  return result;
}

namespace {

MarginalRow marginal_row(const Population& pop, std::span<const double> q, const RunOptions& options) {
  std::vector<double> values(pop.size);
  parallel_for(pop.size, options.threads, [&](std::size_t i) { values[i] = pop.draw(i).field->value(q); });
  MarginalRow row;
  row.label = pop.label;
  row.lambda = pop.lambda;
  row.multiplicity = pop.multiplicity;
  const MeanEstimate e = estimate_mean(values, options.confidence);
  row.mean = e.mean;
  row.variance = e.std_error * e.std_error * static_cast<double>(values.size());
  row.ks = ks_test_normal(std::move(values));
  return row;
}

}  // namespace

MarginalResult marginal_distribution_test(const EigenfunctionSequenceSpec& seq, const Point& point,
                                          const SamplingSpec& sampling, std::uint64_t seed,
                                          const std::optional<SamplerSpec>& control, const RunOptions& options) {
  require_monte_carlo(sampling, "marginal-distribution-test");
  require_count(sampling.base_points, 500, "marginal-distribution-test");
  const int d = seq.manifold.dimension();
  const std::span<const double> q(point.data(), static_cast<std::size_t>(d));
  const Members members = build_members(seq, std::sqrt(point[0] * point[0] + point[1] * point[1] + point[2] * point[2]));
  MarginalResult result;
  result.point = point;
  for (std::size_t li = 0; li < members.psis.size(); ++li) {
    result.rows.push_back(marginal_row(localization_population(members.psis[li], sampling, seed, li), q, options));
  }
  if (control) {
    if (control->dimension != d) throw PreconditionError("sampler and manifold dimensions differ");
    result.control = marginal_row(berry_population(*control, sampling.base_points, seed), q, options);
  }
  return result;
}

MarginalRow berry_marginal(const SamplerSpec& sampler, std::size_t samples, const Point& point, std::uint64_t seed,
                           const RunOptions& options) {
  require_count(samples, 500, "marginal-distribution-test");
  const std::span<const double> q(point.data(), static_cast<std::size_t>(sampler.dimension));
  return marginal_row(berry_population(sampler, samples, seed), q, options);
}

CovarianceResult covariance_profile_test(const EigenfunctionSequenceSpec& seq, std::span<const double> separations,
                                         const Point& direction, const SamplingSpec& sampling, std::uint64_t seed,
                                         const RunOptions& options) {
  require_monte_carlo(sampling, "covariance-profile-test");
  require_count(sampling.base_points, 500, "covariance-profile-test");
  if (separations.empty()) throw PreconditionError("covariance-profile-test needs separations");
  const int d = seq.manifold.dimension();
  double norm = 0.0;
  for (int a = 0; a < d; ++a) norm += direction[static_cast<std::size_t>(a)] * direction[static_cast<std::size_t>(a)];
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw DomainError("covariance direction must be nonzero");
  Point e{};
  for (int a = 0; a < d; ++a) e[static_cast<std::size_t>(a)] = direction[static_cast<std::size_t>(a)] / norm;
  double extent = 0.0;
  for (double r : separations) {
    if (r < 0.0) throw DomainError("separations must be nonnegative");
    extent = std::max(extent, r);
  }
  const Members members = build_members(seq, extent);
  CovarianceResult result;
  result.direction = e;
  const std::size_t nr = separations.size();
  for (std::size_t li = 0; li < members.psis.size(); ++li) {
    const Population pop = localization_population(members.psis[li], sampling, seed, li);
    std::vector<double> products(pop.size * nr);
    parallel_for(pop.size, options.threads, [&](std::size_t i) {
      const Draw draw = pop.draw(i);
      const Point origin{};
      const double f0 = clip_value(draw.field->value(std::span<const double>(origin.data(), static_cast<std::size_t>(d))));
      for (std::size_t k = 0; k < nr; ++k) {
        Point y{};
        for (int a = 0; a < d; ++a) y[static_cast<std::size_t>(a)] = separations[k] * e[static_cast<std::size_t>(a)];
        products[i * nr + k] = f0 * clip_value(draw.field->value(std::span<const double>(y.data(), static_cast<std::size_t>(d))));
      }
    });
    CovarianceRow row;
    row.label = pop.label;
    row.lambda = pop.lambda;
    row.multiplicity = pop.multiplicity;
    row.profile.samples = pop.size;
    std::vector<double> column(pop.size);
    for (std::size_t k = 0; k < nr; ++k) {
      for (std::size_t i = 0; i < pop.size; ++i) column[i] = products[i * nr + k];
      const MeanEstimate est = estimate_mean(column, options.confidence);
      row.profile.separations.push_back(separations[k]);
      row.profile.estimate.push_back(est.mean);
      row.profile.radius.push_back(est.radius);
      row.profile.kernel.push_back(berry_kernel(d, separations[k]));
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

RateCheck check_inverse_sqrt_rate(std::span<const double> lambdas, std::span<const double> ys) {
  if (lambdas.size() != ys.size() || lambdas.size() < 2) throw PreconditionError("rate check needs two or more points");
  RateCheck r;
  r.exponent = fit_power_law(lambdas, ys).exponent;
  r.decreasing = true;
  for (std::size_t i = 1; i < ys.size(); ++i) {
    if (!(ys[i] < ys[i - 1])) r.decreasing = false;
  }
  const double c0 = ys[0] * std::sqrt(lambdas[0]);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    r.constant_ratio = std::max(r.constant_ratio, ys[i] * std::sqrt(lambdas[i]) / c0);
  }
  r.consistent = r.decreasing && r.constant_ratio <= 2.0;
  return r;
}

TranslationResult translation_invariance_test(const EigenfunctionSequenceSpec& seq, const FunctionalSpec& F,
                                              const Point& shift, const SamplingSpec& sampling,
                                              const GridSpec& grid, std::uint64_t seed, const RunOptions& options) {
  if (sampling.policy == BasePolicy::MonteCarlo) require_count(sampling.base_points, 100, "translation-invariance-test");
  const int d = seq.manifold.dimension();
  const GridSpec g = functional_grid(F, grid);
  double shift_norm = 0.0;
  for (int a = 0; a < d; ++a) shift_norm += shift[static_cast<std::size_t>(a)] * shift[static_cast<std::size_t>(a)];
  shift_norm = std::sqrt(shift_norm);
  const Members members = build_members(seq, grid_extent(g) + shift_norm);
  const PreparedFunctional prepared(F, g);
  TranslationResult result;
  result.outputs = prepared.output_names();
  result.shift = shift;
  const std::size_t outputs = prepared.output_size();
  const std::span<const double> y(shift.data(), static_cast<std::size_t>(d));
  for (std::size_t li = 0; li < members.psis.size(); ++li) {
    const Population pop = localization_population(members.psis[li], sampling, seed, li);
    std::vector<std::vector<double>> base(outputs, std::vector<double>(pop.size));
    std::vector<std::vector<double>> moved(outputs, std::vector<double>(pop.size));
    std::vector<std::vector<double>> diff(outputs, std::vector<double>(pop.size));
    std::vector<double> weights(pop.size);
    parallel_for(pop.size, options.threads, [&](std::size_t i) {
      const Draw draw = pop.draw(i);
      const std::vector<double> a = prepared.apply(sample(*draw.field, g));
      const std::vector<double> b = prepared.apply(translate(draw.field, y, g));
      for (std::size_t k = 0; k < outputs; ++k) {
        base[k][i] = a[k];
        moved[k][i] = b[k];
        diff[k][i] = b[k] - a[k];
      }
      weights[i] = draw.weight;
    });
    TranslationRow row;
    row.lambda = pop.lambda;
    row.multiplicity = pop.multiplicity;
    for (std::size_t k = 0; k < outputs; ++k) {
      row.base.push_back(weighted_estimate(base[k], weights, options.confidence));
      row.shifted.push_back(weighted_estimate(moved[k], weights, options.confidence));
      row.gap.push_back(weighted_estimate(diff[k], weights, options.confidence));
    }
    result.rows.push_back(std::move(row));
  }
  if (result.rows.size() >= 2) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& row : result.rows) {
      xs.push_back(row.lambda);
      ys.push_back(std::fabs(row.gap[0].mean));
    }
    if (std::all_of(ys.begin(), ys.end(), [](double v) { return v > 0.0; })) {
      result.rate = check_inverse_sqrt_rate(xs, ys);
    }
  }
  return result;
}

InverseLocalizeResult inverse_localize(const ManifoldSpec& manifold, const EigenvalueEntry& entry,
                                       const BasePoint& p, const FieldSource& target, int order,
                                       const GridSpec& grid) {
  if (entry.multiplicity < 1) throw PreconditionError("eigenspace multiplicity must be at least 1");
  if (target.dimension() != manifold.dimension()) throw DomainError("target and manifold dimensions differ");
  GridSpec g = grid;
  g.order = std::max(order, 0);
  validate_grid(g);
  const LocalizedField h = sample(target, g);
  const Eigenfunction probe = Eigenfunction::raw(manifold, entry, std::vector<double>(static_cast<std::size_t>(entry.multiplicity), 0.0));
  check_localization_domain(probe, grid_extent(g));
  const Eigen::MatrixXd A = basis_values(manifold, entry, p, h);
  Eigen::VectorXd b(static_cast<Eigen::Index>(h.node_count()));
  for (std::size_t i = 0; i < h.node_count(); ++i) b(static_cast<Eigen::Index>(i)) = h.value(i);
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  const Eigen::VectorXd c = cod.solve(b);
  std::vector<double> coefficients(c.data(), c.data() + c.size());
  for (double v : coefficients) {
    if (!std::isfinite(v)) throw NumericalError("least-squares solve produced non-finite coefficients");
  }
  Eigenfunction psi = Eigenfunction::raw(manifold, entry, coefficients);
  const LocalizedField phi = sample(LocalizedEigenfunction(std::make_shared<Eigenfunction>(psi), p), g);
  const double misfit = (A * c - b).norm() / std::sqrt(static_cast<double>(h.node_count()));
  return InverseLocalizeResult{std::move(psi), cr_distance(phi, h, g.order, g.layout == GridLayout::Ball ? g.radius : grid_extent(g)),
                               misfit, static_cast<int>(cod.rank()), entry.multiplicity};
}

IlScanResult il_scan(const ManifoldSpec& manifold, std::span<const EigenvalueEntry> entries, const FieldSource& target,
                     int order, const BasePoint& p, const GridSpec& grid, int threads) {
  if (entries.empty()) throw PreconditionError("il-scan needs a nonempty eigenvalue list");
  IlScanResult result;
  result.rows.resize(entries.size());
  parallel_for(entries.size(), threads, [&](std::size_t i) {
    const InverseLocalizeResult r = inverse_localize(manifold, entries[i], p, target, order, grid);
    result.rows[i] = {entries[i].lambda, entries[i].multiplicity, r.error, r.rms_misfit, r.rank};
  });
  result.min_error = result.rows.front().error;
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    const double prev = result.rows[i - 1].error;
    if (result.rows[i].error > prev * (1.0 + 1e-9) + 1e-14) ++result.increases;
    result.min_error = std::min(result.min_error, result.rows[i].error);
  }
  result.non_increasing = result.increases == 0;
  result.final_error = result.rows.back().error;
  return result;
}

namespace {

StrongIlRow strong_il_population(const Population& pop, const LocalizedField& h, double epsilon, int order,
                                 const GridSpec& grid, const RunOptions& options) {
  std::vector<char> hits(pop.size, 0);
  parallel_for(pop.size, options.threads, [&](std::size_t i) {
    const LocalizedField f = sample(*pop.draw(i).field, grid);
    hits[i] = cr_distance(f, h, order, grid.radius) < epsilon ? 1 : 0;
  });
  StrongIlRow row;
  row.label = pop.label;
  row.lambda = pop.lambda;
  row.multiplicity = pop.multiplicity;
  row.trials = pop.size;
  for (char c : hits) row.successes += static_cast<std::size_t>(c);
  row.fraction = static_cast<double>(row.successes) / static_cast<double>(row.trials);
  row.radius = two_sided_z(options.confidence) * std::sqrt(row.fraction * (1.0 - row.fraction) / static_cast<double>(row.trials));
  row.wilson = wilson_interval(row.successes, row.trials, options.confidence);
  row.positive = row.fraction - row.radius > 0.0;
  return row;
}

void check_strong_il_inputs(const FieldSource& target, double epsilon, int order, const GridSpec& grid) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (order < 0 || order > kMaxUserDerivativeOrder) throw DomainError("order must be in 0..4");
  if (grid.layout != GridLayout::Ball) throw PreconditionError("strong-IL estimates need a ball grid");
  if (target.dimension() != grid.dimension) throw DomainError("target and grid dimensions differ");
}

}  // namespace

StrongIlResult strong_il_measure_estimate(const EigenfunctionSequenceSpec& seq, const FieldSource& target,
                                          double epsilon, int order, const SamplingSpec& sampling,
                                          const GridSpec& grid, std::uint64_t seed,
                                          const std::optional<SamplerSpec>& control, std::size_t control_samples,
                                          const RunOptions& options) {
  require_monte_carlo(sampling, "strong-il-measure-estimate");
  require_count(sampling.base_points, 500, "strong-il-measure-estimate");
  GridSpec g = grid;
  g.order = order;
  check_strong_il_inputs(target, epsilon, order, g);
  const LocalizedField h = sample(target, g);
  const Members members = build_members(seq, g.radius);
  StrongIlResult result;
  for (std::size_t li = 0; li < members.psis.size(); ++li) {
    result.rows.push_back(strong_il_population(localization_population(members.psis[li], sampling, seed, li), h,
                                               epsilon, order, g, options));
  }
  if (control) {
    require_count(control_samples, 500, "strong-il Berry control");
    result.control = strong_il_population(berry_population(*control, control_samples, seed), h, epsilon, order, g, options);
  }
  return result;
}

StrongIlRow strong_il_berry_control(const SamplerSpec& sampler, std::size_t samples, const FieldSource& target,
                                    double epsilon, int order, const GridSpec& grid, std::uint64_t seed,
                                    const RunOptions& options) {
  require_count(samples, 500, "strong-il Berry control");
  GridSpec g = grid;
  g.order = order;
  check_strong_il_inputs(target, epsilon, order, g);
  const LocalizedField h = sample(target, g);
  return strong_il_population(berry_population(sampler, samples, seed), h, epsilon, order, g, options);
}

}  // namespace berrylab
