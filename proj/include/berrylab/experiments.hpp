#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "berrylab/berry_field.hpp"
#include "berrylab/functionals.hpp"
#include "berrylab/localization.hpp"
#include "berrylab/manifolds.hpp"
#include "berrylab/stats.hpp"

namespace berrylab {

enum class CoefficientRule { Deterministic, Random };

/// One eigenfunction per selected eigenvalue. Random coefficients are i.i.d.
/// Gaussian over the eigenspace, drawn from
/// derive_seed(coefficient_seed, {coef, lambda index}), then normalized.
struct EigenfunctionSequenceSpec {
  ManifoldSpec manifold;
  /// Explicit eigenvalues; if empty, every eigenvalue <= max_eigenvalue.
  std::vector<double> eigenvalues;
  double max_eigenvalue = 0.0;
  CoefficientRule rule = CoefficientRule::Random;
  std::uint64_t coefficient_seed = 1;
  /// Deterministic rule: the unit coefficient vector e_{mode_index}.
  int mode_index = 0;
};

std::vector<EigenvalueEntry> resolve_eigenvalues(const EigenfunctionSequenceSpec& seq);
Eigenfunction sequence_member(const EigenfunctionSequenceSpec& seq, const EigenvalueEntry& entry, std::size_t index);

enum class BasePolicy { MonteCarlo, Quadrature };

struct SamplingSpec {
  BasePolicy policy = BasePolicy::MonteCarlo;
  std::size_t base_points = 1000;
  /// Restrict base points to one chart; -1 samples the whole manifold.
  int chart = -1;
  int quadrature_nodes = 32;
};

/// A weighted family of fields: base-point localizations of one eigenfunction,
/// or draws of a Berry sampler.
struct Draw {
  SourcePtr field;
  double weight = 1.0;
  int chart = 0;
};

struct Population {
  std::string label;
  double lambda = 0.0;
  int multiplicity = 0;
  std::size_t size = 0;
  bool quadrature = false;
  std::vector<int> charts;
  std::function<Draw(std::size_t)> draw;
};

/// Localizations phi_p of psi; MC base point i uses derive_seed(seed, {base, lambda_index, i}).
Population localization_population(std::shared_ptr<const Eigenfunction> psi, const SamplingSpec& sampling,
                                   std::uint64_t seed, std::size_t lambda_index);
/// Sampler draws i = 0..count-1 from draw_berry(spec, seed, i).
Population berry_population(const SamplerSpec& sampler, std::size_t count, std::uint64_t seed);

struct RunOptions {
  double confidence = 0.99;
  int threads = 1;
};

/// Unit weights (Monte Carlo draws) give the CLT radius; quadrature weights
/// give the weighted mean with a zero radius.
MeanEstimate weighted_estimate(std::span<const double> values, std::span<const double> weights, double confidence);

/// Applies F to every draw of the population on the grid; rows are outputs.
struct FunctionalSamples {
  std::vector<std::vector<double>> values;  // [output][draw]
  std::vector<double> weights;
  std::vector<int> charts;
};
FunctionalSamples apply_population(const Population& pop, const PreparedFunctional& F, const GridSpec& grid,
                                   int threads);

struct ChartEstimate {
  int chart = 0;
  std::vector<MeanEstimate> outputs;
};

struct LambdaEstimate {
  double lambda = 0.0;
  int multiplicity = 0;
  std::vector<ChartEstimate> charts;
  std::vector<MeanEstimate> pooled;
  std::vector<MeanEstimate> gap;  // pooled - Berry
};

struct BerryExpectationResult {
  std::vector<std::string> outputs;
  std::string functional;
  std::vector<MeanEstimate> berry;
  std::vector<LambdaEstimate> lambdas;
};

BerryExpectationResult berry_expectation_test(const EigenfunctionSequenceSpec& seq, const FunctionalSpec& F,
                                              const SamplingSpec& sampling, const SamplerSpec& sampler,
                                              std::size_t berry_samples, const GridSpec& grid, std::uint64_t seed,
                                              const RunOptions& options = {});

/// Control run: a second, independent Berry population (seed derived from
/// `seed`) in place of the eigenfunction sequence. One row with lambda = 0.
BerryExpectationResult berry_self_consistency(const FunctionalSpec& F, const SamplerSpec& sampler,
                                              std::size_t samples, const GridSpec& grid, std::uint64_t seed,
                                              const RunOptions& options = {});

/// Berry-side expectation of F alone (also the control row of the tests).
std::vector<MeanEstimate> berry_reference(const FunctionalSpec& F, const SamplerSpec& sampler, std::size_t samples,
                                          const GridSpec& grid, std::uint64_t seed, const RunOptions& options = {});

struct MarginalRow {
  std::string label;
  double lambda = 0.0;
  int multiplicity = 0;
  KsResult ks;
  double mean = 0.0;
  double variance = 0.0;
};

struct MarginalResult {
  Point point{};
  std::vector<MarginalRow> rows;
  std::optional<MarginalRow> control;
};

/// KS test of {phi_p(point)} over Monte Carlo base points against N(0, 1).
MarginalResult marginal_distribution_test(const EigenfunctionSequenceSpec& seq, const Point& point,
                                          const SamplingSpec& sampling, std::uint64_t seed,
                                          const std::optional<SamplerSpec>& control = std::nullopt,
                                          const RunOptions& options = {});

/// The marginal test on sampler draws alone.
MarginalRow berry_marginal(const SamplerSpec& sampler, std::size_t samples, const Point& point, std::uint64_t seed,
                           const RunOptions& options = {});

struct CovarianceRow {
  std::string label;
  double lambda = 0.0;
  int multiplicity = 0;
  CovarianceProfile profile;
};

struct CovarianceResult {
  Point direction{};
  std::vector<CovarianceRow> rows;
};

/// E_p[phi_p(0) phi_p(r e)] for each separation r along the fixed unit direction e.
CovarianceResult covariance_profile_test(const EigenfunctionSequenceSpec& seq, std::span<const double> separations,
                                         const Point& direction, const SamplingSpec& sampling, std::uint64_t seed,
                                         const RunOptions& options = {});

struct RateCheck {
  /// y ~ lambda^(-exponent) by log-log least squares.
  double exponent = 0.0;
  bool decreasing = false;
  /// max_k y_k sqrt(lambda_k) / (y_0 sqrt(lambda_0)).
  double constant_ratio = 0.0;
  /// Decreasing and y_k <= 2 (y_0 sqrt(lambda_0)) / sqrt(lambda_k) for every k.
  bool consistent = false;
};

/// One-sided check that y decays at least like C / sqrt(lambda), C fixed to within a factor 2.
RateCheck check_inverse_sqrt_rate(std::span<const double> lambdas, std::span<const double> ys);

struct TranslationRow {
  double lambda = 0.0;
  int multiplicity = 0;
  std::vector<MeanEstimate> base;
  std::vector<MeanEstimate> shifted;
  /// Paired difference E[F(tau_y phi)] - E[F(phi)].
  std::vector<MeanEstimate> gap;
};

struct TranslationResult {
  std::vector<std::string> outputs;
  Point shift{};
  std::vector<TranslationRow> rows;
  /// Rate check on |gap| of the first output; absent with fewer than two rows.
  std::optional<RateCheck> rate;
};

TranslationResult translation_invariance_test(const EigenfunctionSequenceSpec& seq, const FunctionalSpec& F,
                                              const Point& shift, const SamplingSpec& sampling,
                                              const GridSpec& grid, std::uint64_t seed,
                                              const RunOptions& options = {});

struct InverseLocalizeResult {
  Eigenfunction eigenfunction;
  /// ||phi - h||_{C^r(B)} of the least-squares minimizer.
  double error = 0.0;
  /// Root-mean-square value misfit on the grid.
  double rms_misfit = 0.0;
  int rank = 0;
  int multiplicity = 0;
};

/// Least squares on values over the grid (minimum-norm solution), then the
/// C^r error of the minimizer.
InverseLocalizeResult inverse_localize(const ManifoldSpec& manifold, const EigenvalueEntry& entry,
                                       const BasePoint& p, const FieldSource& target, int order,
                                       const GridSpec& grid);

struct IlScanRow {
  double lambda = 0.0;
  int multiplicity = 0;
  double error = 0.0;
  double rms_misfit = 0.0;
  int rank = 0;
};

struct IlScanResult {
  std::vector<IlScanRow> rows;
  /// Number of consecutive pairs where the error increased.
  int increases = 0;
  bool non_increasing = false;
  double min_error = 0.0;
  double final_error = 0.0;
};

IlScanResult il_scan(const ManifoldSpec& manifold, std::span<const EigenvalueEntry> entries, const FieldSource& target,
                     int order, const BasePoint& p, const GridSpec& grid, int threads = 1);

struct StrongIlRow {
  std::string label;
  double lambda = 0.0;
  int multiplicity = 0;
  std::size_t successes = 0;
  std::size_t trials = 0;
  double fraction = 0.0;
  /// Normal-approximation half width at the run confidence.
  double radius = 0.0;
  Interval wilson;
  /// fraction - radius > 0.
  bool positive = false;
};

struct StrongIlResult {
  std::vector<StrongIlRow> rows;
  std::optional<StrongIlRow> control;
};

/// Fraction of base points (or sampler draws for the control) with
/// ||phi - h||_{C^r(B)} < epsilon, with binomial confidence bounds.
StrongIlResult strong_il_measure_estimate(const EigenfunctionSequenceSpec& seq, const FieldSource& target,
                                          double epsilon, int order, const SamplingSpec& sampling,
                                          const GridSpec& grid, std::uint64_t seed,
                                          const std::optional<SamplerSpec>& control,
                                          std::size_t control_samples, const RunOptions& options = {});

/// Berry control alone: same estimator over sampler draws.
StrongIlRow strong_il_berry_control(const SamplerSpec& sampler, std::size_t samples, const FieldSource& target,
                                    double epsilon, int order, const GridSpec& grid, std::uint64_t seed,
                                    const RunOptions& options = {});

}  // namespace berrylab
