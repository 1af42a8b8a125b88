#pragma once

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "berrylab/jet.hpp"

namespace berrylab {

using Point = std::array<double, kMaxDimension>;

/// A smooth function on (a ball in) R^d that can report its Taylor jet at any
/// point. Sampler draws, localized eigenfunctions and targets all implement it.
class FieldSource {
 public:
  virtual ~FieldSource() = default;

  virtual int dimension() const = 0;
  /// Points with |x| <= domain_radius() are inside the accuracy domain.
  virtual double domain_radius() const { return std::numeric_limits<double>::infinity(); }
  /// Taylor jet about `point` truncated at `order` (table (dimension, order)).
  virtual Jet evaluate(std::span<const double> point, int order) const = 0;
  virtual double value(std::span<const double> point) const { return evaluate(point, 0).value(); }
  virtual std::string provenance() const = 0;
};

using SourcePtr = std::shared_ptr<const FieldSource>;

/// Throws DomainError if the point is outside the source's accuracy domain.
void check_in_domain(const FieldSource& source, std::span<const double> point);

/// One term a * cos(omega . x + phase).
struct CosineTerm {
  Point frequency{};
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Finite cosine superposition; derivatives are exact (d^alpha picks up omega^alpha
/// and a quarter-period phase shift per order).
class CosineSum final : public FieldSource {
 public:
  CosineSum(int dimension, std::vector<CosineTerm> terms, std::string provenance);

  int dimension() const override { return dimension_; }
  Jet evaluate(std::span<const double> point, int order) const override;
  double value(std::span<const double> point) const override;
  std::string provenance() const override { return provenance_; }

  std::span<const CosineTerm> terms() const noexcept { return terms_; }

 private:
  int dimension_;
  std::vector<CosineTerm> terms_;
  std::string provenance_;
};

/// A field given by a closed-form expression in jet arithmetic.
class JetFunction final : public FieldSource {
 public:
  using Body = std::function<Jet(std::span<const Jet>)>;

  JetFunction(int dimension, Body body, std::string provenance);

  int dimension() const override { return dimension_; }
  Jet evaluate(std::span<const double> point, int order) const override;
  std::string provenance() const override { return provenance_; }

 private:
  int dimension_;
  Body body_;
  std::string provenance_;
};

/// x -> source(x + shift).
class ShiftedField final : public FieldSource {
 public:
  ShiftedField(SourcePtr source, std::span<const double> shift);

  int dimension() const override { return source_->dimension(); }
  double domain_radius() const override;
  Jet evaluate(std::span<const double> point, int order) const override;
  double value(std::span<const double> point) const override;
  std::string provenance() const override;

 private:
  Point shifted(std::span<const double> point) const;

  SourcePtr source_;
  Point shift_{};
};

/// x -> scale * source(x).
class ScaledField final : public FieldSource {
 public:
  ScaledField(SourcePtr source, double scale);

  int dimension() const override { return source_->dimension(); }
  double domain_radius() const override { return source_->domain_radius(); }
  Jet evaluate(std::span<const double> point, int order) const override;
  std::string provenance() const override;

 private:
  SourcePtr source_;
  double scale_;
};

/// Sum of two fields on the same space (used for perturbation tests).
class SumField final : public FieldSource {
 public:
  SumField(SourcePtr a, SourcePtr b);

  int dimension() const override { return a_->dimension(); }
  double domain_radius() const override;
  Jet evaluate(std::span<const double> point, int order) const override;
  std::string provenance() const override;

 private:
  SourcePtr a_;
  SourcePtr b_;
};

}  // namespace berrylab

namespace berrylab {

/// Values and all partial derivatives up to `order` at a list of points,
/// stored point-major in MultiIndexTable order.
struct DerivativeTable {
  int dimension = 2;
  int order = 0;
  std::vector<Point> points;
  std::vector<double> data;

  const MultiIndexTable& table() const { return MultiIndexTable::get(dimension, order); }
  std::size_t stride() const { return table().size(); }
  double at(std::size_t point, std::size_t entry) const { return data[point * stride() + entry]; }
};

inline constexpr int kMaxUserDerivativeOrder = 4;

/// Evaluates a source at the points with derivatives up to order <= 4.
DerivativeTable evaluate_points(const FieldSource& source, std::span<const Point> points, int order);

}  // namespace berrylab
