#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "berrylab/jet.hpp"

namespace berrylab {

/// Real spherical harmonic label. `order` is 1-based inside the degree:
///   d = 2: l = 0 -> 1 (constant); l >= 1 -> 1 = cos(l phi), 2 = sin(l phi).
///   d = 3: 1 = zonal (m = 0); 2k = cos(k phi); 2k + 1 = sin(k phi), k = 1..l.
struct HarmonicIndex {
  int dimension = 2;
  int degree = 0;
  int order = 1;

  friend bool operator==(const HarmonicIndex&, const HarmonicIndex&) = default;
};

/// Dimension d_l of the degree-l real harmonics on S^{d-1}.
int harmonic_multiplicity(int dimension, int degree);

/// Azimuthal frequency and trig kind of a harmonic label.
struct AzimuthalMode {
  int frequency = 0;
  bool sine = false;
};
AzimuthalMode azimuthal_mode(const HarmonicIndex& idx);

/// Bessel function of the first kind, J_nu(x), nu >= 0, x >= 0.
double bessel_j(double nu, double x);

/// k-th positive zero of J_nu.
double bessel_j_zero(double nu, int k);

/// Legendre polynomial P_l(x) on [-1, 1] by the three-term recurrence.
double legendre_p(int l, double x);

/// Gegenbauer polynomial C_n^{(alpha)}(x), alpha > 0.
double gegenbauer_c(int n, double alpha, double x);

/// Real harmonic orthonormal on S^{d-1} with respect to surface measure.
double spherical_harmonic(const HarmonicIndex& idx, std::span<const double> xi);

/// Normalized isotropic monochromatic covariance K(r) = c_d J_L(r) / r^L with
/// L = (d - 2) / 2 and K(0) = 1; d = 2 gives J_0, d = 3 gives sin(r) / r.
double berry_kernel(int dimension, double r);

/// c_d = 2^L Gamma(L + 1).
double berry_kernel_constant(int dimension);

/// j-th derivative in s of g_nu(s) = J_nu(sqrt s) / (sqrt s)^nu, an entire
/// function of s = |x|^2. Uses g_nu^(j) = (-1/2)^j g_{nu+j}.
double bessel_radial(double nu, double s, int derivative = 0);

/// Normalized harmonic polynomials |y|^l Y_lm(y / |y|) for all degrees up to
/// max_degree, in HarmonicIndex order (degree-major).
class SolidHarmonics {
 public:
  SolidHarmonics(int dimension, int max_degree);

  int dimension() const noexcept { return dimension_; }
  int max_degree() const noexcept { return max_degree_; }
  std::size_t count() const noexcept { return indices_.size(); }
  const HarmonicIndex& index(std::size_t i) const { return indices_[i]; }
  std::size_t offset(int degree) const { return offsets_[static_cast<std::size_t>(degree)]; }

  void evaluate(std::span<const Jet> y, std::vector<Jet>& out) const;
  void evaluate_values(std::span<const double> y, std::vector<double>& out) const;

 private:
  struct Term {
    int z_power;
    int s_power;
    double coefficient;
  };
  int dimension_;
  int max_degree_;
  std::vector<HarmonicIndex> indices_;
  std::vector<std::size_t> offsets_;
  // d = 3: polynomial Q_lm(z, s) for each (l, m), m = 0..l, with normalization folded in.
  std::vector<std::vector<Term>> q_terms_;
  std::vector<double> norms_;
};

/// Degree-l real harmonics on the unit sphere S^2 evaluated along a jet
/// curve omega(y) that stays on the sphere. Stable for large l (Gegenbauer
/// recurrences with log-scaled prefactors).
class SphereHarmonicDegree {
 public:
  explicit SphereHarmonicDegree(int degree);

  int degree() const noexcept { return degree_; }
  std::size_t count() const noexcept { return static_cast<std::size_t>(2 * degree_ + 1); }

  void evaluate(std::span<const Jet> omega, std::vector<Jet>& out) const;
  void evaluate_values(std::span<const double> omega, std::vector<double>& out) const;
  /// sum_m coefficients[m] Y_lm along omega; zero coefficients are skipped.
  Jet combine(std::span<const Jet> omega, std::span<const double> coefficients) const;

 private:
  /// scaled[m][j] = N_lm * d^{m+j} P_l / dz^{m+j} (z), j = 0..order.
  void scaled_derivatives(double z, int order, std::vector<std::vector<double>>& scaled) const;

  int degree_;
  std::vector<double> log_norms_;        // log N_lm, m = 0..l
  std::vector<double> log_double_fact_;  // log (2k - 1)!!, k = 0..l + kMaxJetOrder
};

}  // namespace berrylab
