#include "berrylab/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "berrylab/errors.hpp"

namespace berrylab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesLimit = 20.0;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

void require_dimension(int d) {
  if (d != 2 && d != 3) throw DomainError("dimension must be 2 or 3, got " + std::to_string(d));
}

// sum_k (-s/4)^k / (k! Gamma(k + nu + 1)); g_nu(s) = 2^-nu times this.
long double ascending_core(double nu, double s) {
  const long double q = -static_cast<long double>(s) / 4.0L;
  long double term = 1.0L / std::tgamma(static_cast<long double>(nu) + 1.0L);
  if (!std::isfinite(static_cast<double>(term)) || term == 0.0L) {
    term = std::exp(-std::lgamma(static_cast<long double>(nu) + 1.0L));
  }
  long double sum = term;
  const long double bound = 1e-21L;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<long double>(k) * (static_cast<long double>(k) + nu));
    sum += term;
    if (std::fabs(term) <= bound * std::fabs(sum) && k > std::sqrt(std::fabs(q))) break;
  }
  return sum;
}

double bessel_series(double nu, double x) {
  // J_nu(x) = (x/2)^nu * core(x^2)
  const long double half = static_cast<long double>(x) / 2.0L;
  const long double lead = nu == 0.0 ? 1.0L : std::pow(half, static_cast<long double>(nu));
  return static_cast<double>(lead * ascending_core(nu, x * x));
}

// Hankel expansion for large x, valid for moderate order.
double bessel_hankel(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 0.0;
  double q = 0.0;
  double term = 1.0;
  double previous = INFINITY;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      term *= (mu - odd * odd) / (k * 8.0 * x);
    }
    const double magnitude = std::fabs(term);
    if (magnitude > previous) break;
    previous = magnitude;
    switch (k % 4) {
      case 0: p += term; break;
      case 1: q += term; break;
      case 2: p -= term; break;
      default: q -= term; break;
    }
    if (magnitude < 1e-17) break;
  }
  const double chi = x - (nu / 2.0 + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_large(double nu, double x) {
  const double base = nu - std::floor(nu);
  const int steps = static_cast<int>(std::floor(nu));
  const double j0 = bessel_hankel(base, x);
  if (steps == 0) return j0;
  const double j1 = bessel_hankel(base + 1.0, x);
  if (steps == 1) return j1;
  if (nu < x) {
    double prev = j0;
    double cur = j1;
    for (int k = 1; k < steps; ++k) {
      const double mu = base + k;
      const double next = 2.0 * mu / x * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  // Miller's backward recurrence, normalized against the larger base value.
  const int top = steps + 30 + static_cast<int>(std::sqrt(40.0 * (steps + 1)));
  double above = 0.0;
  double cur = 1e-280;
  double at_nu = 0.0;
  double at_base = 0.0;
  double at_base1 = 0.0;
  for (int k = top; k >= 1; --k) {
    const double mu = base + k;
    const double below = 2.0 * mu / x * cur - above;
    above = cur;
    cur = below;
    if (k - 1 == steps) at_nu = cur;
    if (k - 1 == 1) at_base1 = cur;
    if (k - 1 == 0) at_base = cur;
    if (std::fabs(cur) > 1e250) {
      above *= 1e-250;
      cur *= 1e-250;
      at_nu *= 1e-250;
      at_base *= 1e-250;
      at_base1 *= 1e-250;
    }
  }
  if (std::fabs(j0) >= std::fabs(j1)) return at_nu * (j0 / at_base);
  return at_nu * (j1 / at_base1);
}

double log_double_factorial_odd(int k) {
  // log (2k - 1)!! = log (2k)! - k log 2 - log k!
  return std::lgamma(2.0 * k + 1.0) - k * std::numbers::ln2 - std::lgamma(k + 1.0);
}

double sphere_log_norm(int l, int m) {
  double v = std::log((2.0 * l + 1.0) / (4.0 * kPi));
  if (m > 0) v += std::numbers::ln2 + std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0);
  return 0.5 * v;
}

double circle_norm(int l) { return l == 0 ? 1.0 / std::sqrt(2.0 * kPi) : 1.0 / std::sqrt(kPi); }

void validate_index(const HarmonicIndex& idx) {
  require_dimension(idx.dimension);
  if (idx.degree < 0) throw DomainError("harmonic degree must be nonnegative");
  const int mult = harmonic_multiplicity(idx.dimension, idx.degree);
  if (idx.order < 1 || idx.order > mult) {
    throw DomainError("harmonic order " + std::to_string(idx.order) + " outside 1.." +
                      std::to_string(mult));
  }
}

}  // namespace

int harmonic_multiplicity(int dimension, int degree) {
  require_dimension(dimension);
  if (degree < 0) throw DomainError("harmonic degree must be nonnegative");
  if (dimension == 2) return degree == 0 ? 1 : 2;
  return 2 * degree + 1;
}

AzimuthalMode azimuthal_mode(const HarmonicIndex& idx) {
  validate_index(idx);
  if (idx.dimension == 2) {
    if (idx.degree == 0) return {0, false};
    return {idx.degree, idx.order == 2};
  }
  if (idx.order == 1) return {0, false};
  return {idx.order / 2, idx.order % 2 == 1};
}

double bessel_j(double nu, double x) {
  require_finite(nu, "Bessel order");
  require_finite(x, "Bessel argument");
  if (nu < 0.0) throw DomainError("Bessel order must be nonnegative");
  if (x < 0.0) throw DomainError("Bessel argument must be nonnegative");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x <= kSeriesLimit) return bessel_series(nu, x);
  return bessel_large(nu, x);
}

double bessel_j_zero(double nu, int k) {
  require_finite(nu, "Bessel order");
  if (nu < 0.0) throw DomainError("Bessel order must be nonnegative");
  if (k < 1) throw DomainError("zero index must be positive");
  // Consecutive zeros are more than 2.4 apart, so a 0.25 scan brackets each one.
  const double step = 0.25;
  const double limit = nu + 4.0 * (k + 2) + 2.0 * kPi * k;
  double a = std::max(nu, 1e-3);
  double fa = bessel_j(nu, a);
  int found = 0;
  while (a < limit) {
    const double b = a + step;
    const double fb = bessel_j(nu, b);
    if (fb == 0.0) {
      if (++found == k) return b;
    } else if ((fa < 0.0) != (fb < 0.0) && fa != 0.0) {
      if (++found == k) {
        std::uintmax_t iterations = 200;
        auto tol = [](double lo, double hi) { return std::fabs(hi - lo) <= 1e-15 * std::max(1.0, std::fabs(lo)); };
        const auto root = boost::math::tools::toms748_solve([nu](double t) { return bessel_j(nu, t); },
                                                            a, b, fa, fb, tol, iterations);
        return 0.5 * (root.first + root.second);
      }
    }
    a = b;
    fa = fb;
  }
  throw NumericalError("bessel_j_zero: bracketing failed for order " + std::to_string(nu) +
                       ", zero " + std::to_string(k));
}

double legendre_p(int l, double x) {
  require_finite(x, "Legendre argument");
  if (l < 0) throw DomainError("Legendre degree must be nonnegative");
  if (std::fabs(x) > 1.0) throw DomainError("Legendre argument outside [-1, 1]");
  if (l == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int n = 1; n < l; ++n) {
    const double next = ((2.0 * n + 1.0) * x * cur - n * prev) / (n + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double gegenbauer_c(int n, double alpha, double x) {
  if (n < 0) throw DomainError("Gegenbauer degree must be nonnegative");
  if (!(alpha > 0.0)) throw DomainError("Gegenbauer parameter must be positive");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * alpha * x;
  for (int k = 2; k <= n; ++k) {
    const double next = (2.0 * x * (k + alpha - 1.0) * cur - (k + 2.0 * alpha - 2.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

double spherical_harmonic(const HarmonicIndex& idx, std::span<const double> xi) {
  validate_index(idx);
  if (static_cast<int>(xi.size()) != idx.dimension) {
    throw DomainError("point dimension does not match harmonic dimension");
  }
  double norm2 = 0.0;
  for (double v : xi) {
    require_finite(v, "harmonic argument");
    norm2 += v * v;
  }
  if (std::fabs(std::sqrt(norm2) - 1.0) > 1e-12) throw DomainError("spherical_harmonic needs a unit vector");
  if (idx.dimension == 2) {
    const AzimuthalMode mode = azimuthal_mode(idx);
    const double phi = std::atan2(xi[1], xi[0]);
    const double trig = mode.sine ? std::sin(mode.frequency * phi) : std::cos(mode.frequency * phi);
    return circle_norm(idx.degree) * trig;
  }
  SphereHarmonicDegree degree(idx.degree);
  std::vector<double> values;
  degree.evaluate_values(xi, values);
  return values[static_cast<std::size_t>(idx.order - 1)];
}

double berry_kernel_constant(int dimension) {
  require_dimension(dimension);
  const double lambda = (dimension - 2) / 2.0;
  return std::pow(2.0, lambda) * std::tgamma(lambda + 1.0);
}

double berry_kernel(int dimension, double r) {
  require_dimension(dimension);
  require_finite(r, "kernel radius");
  if (r < 0.0) throw DomainError("kernel radius must be nonnegative");
  const double lambda = (dimension - 2) / 2.0;
  if (r <= kSeriesLimit) {
    return static_cast<double>(std::tgamma(lambda + 1.0) * ascending_core(lambda, r * r));
  }
  return berry_kernel_constant(dimension) * bessel_j(lambda, r) / std::pow(r, lambda);
}

double bessel_radial(double nu, double s, int derivative) {
  require_finite(nu, "radial order");
  require_finite(s, "radial argument");
  if (nu < 0.0 || s < 0.0 || derivative < 0) throw DomainError("bessel_radial arguments must be nonnegative");
  const double order = nu + derivative;
  double value;
  if (s <= kSeriesLimit * kSeriesLimit) {
    value = static_cast<double>(ascending_core(order, s)) * std::pow(2.0, -order);
  } else {
    const double r = std::sqrt(s);
    value = bessel_j(order, r) / std::pow(r, order);
  }
  return std::pow(-0.5, derivative) * value;
}

SolidHarmonics::SolidHarmonics(int dimension, int max_degree) : dimension_(dimension), max_degree_(max_degree) {
  require_dimension(dimension);
  if (max_degree < 0) throw DomainError("harmonic degree cap must be nonnegative");
  for (int l = 0; l <= max_degree; ++l) {
    offsets_.push_back(indices_.size());
    const int mult = harmonic_multiplicity(dimension, l);
    for (int m = 1; m <= mult; ++m) indices_.push_back({dimension, l, m});
  }
  offsets_.push_back(indices_.size());
  if (dimension == 2) {
    for (int l = 0; l <= max_degree; ++l) norms_.push_back(circle_norm(l));
    return;
  }
  // D_m(t) = d^m P_l / dt^m = sum_k c_k t^{l-m-2k};  r^l P_l^m = rho^m sum_k c_k z^{l-m-2k} s^k.
  for (int l = 0; l <= max_degree; ++l) {
    for (int m = 0; m <= l; ++m) {
      std::vector<Term> terms;
      const double norm = std::exp(sphere_log_norm(l, m));
      for (int k = 0; 2 * k <= l - m; ++k) {
        const int p = l - 2 * k;  // power in P_l before differentiation
        double log_c = -l * std::numbers::ln2 + std::lgamma(l + 1.0) - std::lgamma(k + 1.0) -
                       std::lgamma(l - k + 1.0) + std::lgamma(2.0 * l - 2.0 * k + 1.0) -
                       std::lgamma(l + 1.0) - std::lgamma(l - 2.0 * k + 1.0) + std::lgamma(p + 1.0) -
                       std::lgamma(p - m + 1.0);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        terms.push_back({p - m, k, sign * norm * std::exp(log_c)});
      }
      q_terms_.push_back(std::move(terms));
    }
  }
}

void SolidHarmonics::evaluate(std::span<const Jet> y, std::vector<Jet>& out) const {
  if (static_cast<int>(y.size()) != dimension_) throw DomainError("SolidHarmonics: point dimension mismatch");
  const MultiIndexTable& table = y[0].table();
  out.assign(indices_.size(), Jet(table));
  // Complex powers (y1 + i y2)^m.
  std::vector<Jet> re;
  std::vector<Jet> im;
  re.reserve(static_cast<std::size_t>(max_degree_ + 1));
  im.reserve(static_cast<std::size_t>(max_degree_ + 1));
  re.emplace_back(table, 1.0);
  im.emplace_back(table, 0.0);
  for (int m = 1; m <= max_degree_; ++m) {
    const Jet& a = re.back();
    const Jet& b = im.back();
    Jet nr(table);
    nr.add_product(a, y[0]);
    nr.add_product(b, y[1], -1.0);
    Jet ni(table);
    ni.add_product(a, y[1]);
    ni.add_product(b, y[0]);
    re.push_back(std::move(nr));
    im.push_back(std::move(ni));
  }
  if (dimension_ == 2) {
    out[0] = re[0] * norms_[0];
    for (int l = 1; l <= max_degree_; ++l) {
      const std::size_t o = offsets_[static_cast<std::size_t>(l)];
      out[o] = re[static_cast<std::size_t>(l)] * norms_[static_cast<std::size_t>(l)];
      out[o + 1] = im[static_cast<std::size_t>(l)] * norms_[static_cast<std::size_t>(l)];
    }
    return;
  }
  std::vector<Jet> zp;
  std::vector<Jet> sp;
  zp.emplace_back(table, 1.0);
  for (int k = 1; k <= max_degree_; ++k) zp.push_back(zp.back() * y[2]);
  Jet s = y[0] * y[0];
  s.add_product(y[1], y[1]);
  s.add_product(y[2], y[2]);
  sp.emplace_back(table, 1.0);
  for (int k = 1; 2 * k <= max_degree_; ++k) sp.push_back(sp.back() * s);
  std::size_t q = 0;
  Jet poly(table);
  for (int l = 0; l <= max_degree_; ++l) {
    const std::size_t o = offsets_[static_cast<std::size_t>(l)];
    for (int m = 0; m <= l; ++m, ++q) {
      poly.set_zero();
      for (const Term& t : q_terms_[q]) {
        poly.add_product(zp[static_cast<std::size_t>(t.z_power)], sp[static_cast<std::size_t>(t.s_power)],
                         t.coefficient);
      }
      if (m == 0) {
        out[o] = poly;
      } else {
        out[o + static_cast<std::size_t>(2 * m - 1)] = poly * re[static_cast<std::size_t>(m)];
        out[o + static_cast<std::size_t>(2 * m)] = poly * im[static_cast<std::size_t>(m)];
      }
    }
  }
}

void SolidHarmonics::evaluate_values(std::span<const double> y, std::vector<double>& out) const {
  if (static_cast<int>(y.size()) != dimension_) throw DomainError("SolidHarmonics: point dimension mismatch");
  out.assign(indices_.size(), 0.0);
  std::vector<double> re(static_cast<std::size_t>(max_degree_ + 1));
  std::vector<double> im(static_cast<std::size_t>(max_degree_ + 1));
  re[0] = 1.0;
  im[0] = 0.0;
  for (std::size_t m = 1; m < re.size(); ++m) {
    re[m] = re[m - 1] * y[0] - im[m - 1] * y[1];
    im[m] = re[m - 1] * y[1] + im[m - 1] * y[0];
  }
  if (dimension_ == 2) {
    out[0] = norms_[0];
    for (int l = 1; l <= max_degree_; ++l) {
      const std::size_t o = offsets_[static_cast<std::size_t>(l)];
      out[o] = re[static_cast<std::size_t>(l)] * norms_[static_cast<std::size_t>(l)];
      out[o + 1] = im[static_cast<std::size_t>(l)] * norms_[static_cast<std::size_t>(l)];
    }
    return;
  }
  std::vector<double> zp(static_cast<std::size_t>(max_degree_ + 1));
  std::vector<double> sp(static_cast<std::size_t>(max_degree_ / 2 + 1));
  const double s = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
  zp[0] = 1.0;
  for (std::size_t k = 1; k < zp.size(); ++k) zp[k] = zp[k - 1] * y[2];
  sp[0] = 1.0;
  for (std::size_t k = 1; k < sp.size(); ++k) sp[k] = sp[k - 1] * s;
  std::size_t q = 0;
  for (int l = 0; l <= max_degree_; ++l) {
    const std::size_t o = offsets_[static_cast<std::size_t>(l)];
    for (int m = 0; m <= l; ++m, ++q) {
      double poly = 0.0;
      for (const Term& t : q_terms_[q]) {
        poly += t.coefficient * zp[static_cast<std::size_t>(t.z_power)] * sp[static_cast<std::size_t>(t.s_power)];
      }
      if (m == 0) {
        out[o] = poly;
      } else {
        out[o + static_cast<std::size_t>(2 * m - 1)] = poly * re[static_cast<std::size_t>(m)];
        out[o + static_cast<std::size_t>(2 * m)] = poly * im[static_cast<std::size_t>(m)];
      }
    }
  }
}

SphereHarmonicDegree::SphereHarmonicDegree(int degree) : degree_(degree) {
  if (degree < 0) throw DomainError("harmonic degree must be nonnegative");
  for (int m = 0; m <= degree; ++m) log_norms_.push_back(sphere_log_norm(degree, m));
  for (int k = 0; k <= degree + kMaxJetOrder; ++k) log_double_fact_.push_back(log_double_factorial_odd(k));
}

void SphereHarmonicDegree::scaled_derivatives(double z, int order,
                                              std::vector<std::vector<double>>& scaled) const {
  // d^k P_l / dz^k = (2k - 1)!! C^{(k + 1/2)}_{l - k}(z)
  const int l = degree_;
  std::vector<double> gegen(static_cast<std::size_t>(l + order + 1), 0.0);
  for (int k = 0; k <= l; ++k) gegen[static_cast<std::size_t>(k)] = gegenbauer_c(l - k, k + 0.5, z);
  scaled.assign(static_cast<std::size_t>(l + 1), std::vector<double>(static_cast<std::size_t>(order + 1), 0.0));
  for (int m = 0; m <= l; ++m) {
    for (int j = 0; j <= order && m + j <= l; ++j) {
      const int k = m + j;
      const double g = gegen[static_cast<std::size_t>(k)];
      if (g == 0.0) continue;
      const double lg = std::log(std::fabs(g)) + log_double_fact_[static_cast<std::size_t>(k)] +
                        log_norms_[static_cast<std::size_t>(m)];
      scaled[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] = std::copysign(std::exp(lg), g);
    }
  }
}

void SphereHarmonicDegree::evaluate(std::span<const Jet> omega, std::vector<Jet>& out) const {
  if (omega.size() != 3) throw DomainError("sphere harmonics need a point in R^3");
  const MultiIndexTable& table = omega[0].table();
  std::vector<std::vector<double>> scaled;
  scaled_derivatives(omega[2].value(), table.order(), scaled);
  out.assign(count(), Jet(table));
  Jet re(table, 1.0);
  Jet im(table, 0.0);
  for (int m = 0; m <= degree_; ++m) {
    if (m > 0) {
      Jet nr(table);
      nr.add_product(re, omega[0]);
      nr.add_product(im, omega[1], -1.0);
      Jet ni(table);
      ni.add_product(re, omega[1]);
      ni.add_product(im, omega[0]);
      re = std::move(nr);
      im = std::move(ni);
    }
    const Jet d = compose(scaled[static_cast<std::size_t>(m)], omega[2]);
    if (m == 0) {
      out[0] = d;
    } else {
      out[static_cast<std::size_t>(2 * m - 1)] = d * re;
      out[static_cast<std::size_t>(2 * m)] = d * im;
    }
  }
}

Jet SphereHarmonicDegree::combine(std::span<const Jet> omega, std::span<const double> coefficients) const {
  if (omega.size() != 3) throw DomainError("sphere harmonics need a point in R^3");
  if (coefficients.size() != count()) throw DomainError("coefficient count must be 2l + 1");
  const MultiIndexTable& table = omega[0].table();
  std::vector<std::vector<double>> scaled;
  scaled_derivatives(omega[2].value(), table.order(), scaled);
  Jet out(table);
  Jet re(table, 1.0);
  Jet im(table, 0.0);
  for (int m = 0; m <= degree_; ++m) {
    if (m > 0) {
      Jet nr(table);
      nr.add_product(re, omega[0]);
      nr.add_product(im, omega[1], -1.0);
      Jet ni(table);
      ni.add_product(re, omega[1]);
      ni.add_product(im, omega[0]);
      re = std::move(nr);
      im = std::move(ni);
    }
    const double cc = m == 0 ? coefficients[0] : coefficients[static_cast<std::size_t>(2 * m - 1)];
    const double cs = m == 0 ? 0.0 : coefficients[static_cast<std::size_t>(2 * m)];
    if (cc == 0.0 && cs == 0.0) continue;
    const Jet d = compose(scaled[static_cast<std::size_t>(m)], omega[2]);
    if (m == 0) {
      out.add_scaled(d, cc);
      continue;
    }
    Jet trig = re * cc;
    trig.add_scaled(im, cs);
    out.add_product(d, trig);
  }
  return out;
}

void SphereHarmonicDegree::evaluate_values(std::span<const double> omega, std::vector<double>& out) const {
  if (omega.size() != 3) throw DomainError("sphere harmonics need a point in R^3");
  std::vector<std::vector<double>> scaled;
  scaled_derivatives(omega[2], 0, scaled);
  out.assign(count(), 0.0);
  double re = 1.0;
  double im = 0.0;
  for (int m = 0; m <= degree_; ++m) {
    if (m > 0) {
      const double nr = re * omega[0] - im * omega[1];
      im = re * omega[1] + im * omega[0];
      re = nr;
    }
    const double d = scaled[static_cast<std::size_t>(m)][0];
    if (m == 0) {
      out[0] = d;
    } else {
      out[static_cast<std::size_t>(2 * m - 1)] = d * re;
      out[static_cast<std::size_t>(2 * m)] = d * im;
    }
  }
}

}  // namespace berrylab
