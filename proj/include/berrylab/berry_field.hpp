#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "berrylab/field_source.hpp"
#include "berrylab/rng.hpp"
#include "berrylab/special_functions.hpp"

namespace berrylab {

inline constexpr int kDefaultDirections = 256;
inline constexpr int kDefaultDegreeCap = 16;
/// Bessel-Fourier expansions are evaluated only on |x| <= this radius.
inline constexpr double kBesselFourierRadius = 10.0;

struct PlaneWaveEnsemble {
  int dimension = 2;
  std::vector<Point> directions;
  std::vector<double> phases;
  std::uint64_t seed = 0;

  std::size_t count() const noexcept { return directions.size(); }
};

/// K uniform directions (normalized Gaussian vectors) and uniform phases.
PlaneWaveEnsemble sample_plane_wave(int dimension, int count, std::uint64_t seed);

/// Psi(x) = sqrt(2 / K) sum_k cos(theta_k . x + eta_k).
std::shared_ptr<const CosineSum> plane_wave_field(const PlaneWaveEnsemble& ensemble);

/// Derivatives up to order r <= 4 at the points.
DerivativeTable eval_plane_wave(const PlaneWaveEnsemble& ensemble, std::span<const Point> points, int order);

/// sum_{l <= L} sum_m c_lm J_{l+L'}(|x|) / |x|^{L'} Y_lm(x / |x|), L' = (d - 2) / 2,
/// written as c_lm g_{l+L'}(|x|^2) H_lm(x) with H_lm the solid harmonic so the
/// origin needs no special case.
class BesselFourierFunction final : public FieldSource {
 public:
  BesselFourierFunction(int dimension, int degree_cap, std::vector<double> coefficients,
                        std::string provenance = "bessel-fourier");

  int dimension() const override { return dimension_; }
  double domain_radius() const override { return kBesselFourierRadius; }
  Jet evaluate(std::span<const double> point, int order) const override;
  double value(std::span<const double> point) const override;
  std::string provenance() const override { return provenance_; }

  int degree_cap() const noexcept { return degree_cap_; }
  std::span<const double> coefficients() const noexcept { return coefficients_; }
  double coefficient(const HarmonicIndex& idx) const;
  const SolidHarmonics& harmonics() const noexcept { return *harmonics_; }

 private:
  int dimension_;
  int degree_cap_;
  std::vector<double> coefficients_;
  std::string provenance_;
  std::shared_ptr<const SolidHarmonics> harmonics_;
};

/// Per-degree coefficient variance sigma_l^2 that reproduces the kernel:
/// 2 pi for d = 2 and 2 pi^2 for d = 3 (independent of l).
double bessel_fourier_variance(int dimension);

/// Number of coefficients with degree <= L.
std::size_t bessel_fourier_size(int dimension, int degree_cap);

/// Independent N(0, sigma_l^2) coefficients in HarmonicIndex order.
BesselFourierFunction sample_bessel_fourier(int dimension, int degree_cap, std::uint64_t seed);

DerivativeTable eval_bessel_fourier(const BesselFourierFunction& f, std::span<const Point> points, int order);

/// The radial wave berry_kernel(d, |x|): J_0(|x|) for d = 2, sin|x| / |x| for d = 3.
BesselFourierFunction radial_wave(int dimension, double scale = 1.0);

/// Single mode c * J_{l+L'}(|x|)/|x|^{L'} Y_lm.
BesselFourierFunction harmonic_wave(const HarmonicIndex& idx, double coefficient = 1.0);

/// Jacobi-Anger expansion of amplitude * cos(theta . x + eta) truncated at degree L.
BesselFourierFunction plane_wave_expansion(int dimension, const Point& direction, double phase,
                                           double amplitude, int degree_cap);

enum class SamplerKind { PlaneWave, BesselFourier };

struct SamplerSpec {
  SamplerKind kind = SamplerKind::PlaneWave;
  int dimension = 2;
  int directions = kDefaultDirections;
  int degree_cap = kDefaultDegreeCap;
};

const char* sampler_name(SamplerKind kind);

/// Draw `index` of a sampler stream: seed = derive_seed(master, {berry, index}).
SourcePtr draw_berry(const SamplerSpec& spec, std::uint64_t master_seed, std::uint64_t index);

struct CovarianceOptions {
  /// Point pairs averaged per sample.
  int pairs = 8;
  /// Base points are uniform in the ball of this radius unless `base` is set.
  double base_radius = 1.0;
  std::optional<Point> base;
  /// Directions are uniform on the sphere unless `direction` is set.
  std::optional<Point> direction;
  double confidence = 0.99;
  int threads = 1;
};

struct CovarianceProfile {
  std::vector<double> separations;
  std::vector<double> estimate;
  std::vector<double> radius;
  std::vector<double> kernel;
  std::size_t samples = 0;

  double sup_deviation() const;
};

/// Values are clipped to |f| <= 8 before forming products.
inline constexpr double kClip = 8.0;
double clip_value(double v);

CovarianceProfile empirical_covariance(const SamplerSpec& spec, std::size_t samples,
                                       std::span<const double> separations, std::uint64_t seed,
                                       const CovarianceOptions& options = {});

/// Uniform direction on S^{d-1} and uniform point in the ball of radius R.
Point random_direction(int dimension, Engine& engine);
Point random_in_ball(int dimension, double radius, Engine& engine);

}  // namespace berrylab
