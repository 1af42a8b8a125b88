#pragma once

// Truncated multivariate Taylor arithmetic. Every derivative the library
// reports (eigenfunctions, samplers, localizations) is produced by pushing
// jets through closed-form maps, so no finite differences appear anywhere.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace berrylab {

inline constexpr int kMaxDimension = 3;
inline constexpr int kMaxJetOrder = 8;

using MultiIndex = std::array<int, kMaxDimension>;

/// Multi-indices |alpha| <= order in `dimension` variables, graded by total
/// degree and ordered lexicographically (descending) inside each degree:
/// d = 2 gives 00, 10, 01, 20, 11, 02, ...
class MultiIndexTable {
 public:
  struct Product {
    std::uint16_t lhs;
    std::uint16_t rhs;
    std::uint16_t out;
  };

  static const MultiIndexTable& get(int dimension, int order);

  int dimension() const noexcept { return dimension_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return indices_.size(); }

  const MultiIndex& index(std::size_t i) const { return indices_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  /// alpha! for entry i (converts Taylor coefficients to derivatives).
  double factorial(std::size_t i) const { return factorials_[i]; }
  /// Number of entries with total degree <= k.
  std::size_t count_up_to(int k) const { return degree_end_[static_cast<std::size_t>(k)]; }
  std::size_t position(const MultiIndex& alpha) const;
  std::span<const Product> products() const noexcept { return products_; }
  /// Column label such as "d20" (d = 2) or "d011" (d = 3).
  std::string label(std::size_t i) const;

 private:
  MultiIndexTable(int dimension, int order);

  int dimension_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degrees_;
  std::vector<double> factorials_;
  std::vector<std::size_t> degree_end_;
  std::vector<Product> products_;
};

class Jet {
 public:
  using Storage = boost::container::small_vector<double, 36>;

  explicit Jet(const MultiIndexTable& table, double value = 0.0);

  /// The coordinate function y_axis expanded about `value`.
  static Jet variable(const MultiIndexTable& table, int axis, double value);

  const MultiIndexTable& table() const noexcept { return *table_; }
  double value() const noexcept { return c_[0]; }
  std::size_t size() const noexcept { return c_.size(); }
  double coefficient(std::size_t i) const { return c_[i]; }
  double& coefficient(std::size_t i) { return c_[i]; }
  /// Partial derivative for multi-index entry i.
  double derivative(std::size_t i) const { return c_[i] * table_->factorial(i); }

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator+=(double v) {
    c_[0] += v;
    return *this;
  }
  Jet& operator-=(double v) {
    c_[0] -= v;
    return *this;
  }
  Jet& operator*=(double s);
  Jet& operator*=(const Jet& other);

  /// this += a * b without a temporary.
  void add_product(const Jet& a, const Jet& b, double scale = 1.0);
  /// this += s * a.
  void add_scaled(const Jet& a, double s);
  void set_zero();

 private:
  const MultiIndexTable* table_;
  Storage c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator-(Jet a);

/// f(u) from the derivatives f(u0), f'(u0), ..., f^(n)(u0) with u0 = u.value().
/// Missing high derivatives are treated as zero.
Jet compose(std::span<const double> derivatives, const Jet& u);

Jet cos(const Jet& u);
Jet sin(const Jet& u);
Jet exp(const Jet& u);
Jet sqrt(const Jet& u);
Jet reciprocal(const Jet& u);

/// Identity jets y_i expanded about `point`.
std::vector<Jet> coordinate_jets(const MultiIndexTable& table, std::span<const double> point);

}  // namespace berrylab
