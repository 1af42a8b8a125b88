#pragma once

#include <string>
#include <vector>

#include "berrylab/field_source.hpp"
#include "berrylab/localization.hpp"

namespace berrylab {

enum class FunctionalKind { PointEval, Moment, PairProduct, ChiNorm, NodalCount };

const char* functional_name(FunctionalKind kind);

/// Declarative description of a test functional F. Point values are clipped
/// to |f| <= 8, which is what makes PointEval, Moment and PairProduct bounded.
struct FunctionalSpec {
  FunctionalKind kind = FunctionalKind::Moment;
  /// PointEval: all points; Moment: points[0]; PairProduct: points[0], points[1].
  std::vector<Point> points;
  int power = 1;
  /// ChiNorm: chi(||f - target||_{C^order(B(0, radius))}, epsilon).
  SourcePtr target;
  int order = 1;
  double epsilon = 0.5;
  double radius = 1.0;
  /// NodalCount: sign regions of f - threshold.
  double threshold = 0.0;
};

/// 1 on [0, eps/2], 0 on [eps, inf), smooth and strictly decreasing between:
/// chi(t) = 1 - B(2t/eps - 1), B(u) = e(u) / (e(u) + e(1 - u)), e(s) = exp(-1/s).
double chi(double t, double epsilon);

/// Derivative order the functional reads from the field.
int required_order(const FunctionalSpec& spec);

/// Builds the spec with defaults checked; throws DomainError on bad parameters.
void validate_functional(const FunctionalSpec& spec);

struct NodalCounts {
  int positive = 0;
  int negative = 0;
};

/// Connected components of {f > t} and {f < t} on the 4-neighbour lattice of a
/// two-dimensional ball grid.
NodalCounts nodal_component_count(const LocalizedField& f, double threshold = 0.0);

/// A functional bound to one grid: ChiNorm targets are sampled once.
class PreparedFunctional {
 public:
  PreparedFunctional(FunctionalSpec spec, const GridSpec& grid);

  const FunctionalSpec& spec() const noexcept { return spec_; }
  /// sup |F| over its domain.
  double bound() const noexcept { return bound_; }
  std::size_t output_size() const;
  std::vector<std::string> output_names() const;
  std::string describe() const;

  std::vector<double> apply(const LocalizedField& f) const;

 private:
  std::size_t node_of(const LocalizedField& f, const Point& p) const;

  FunctionalSpec spec_;
  GridSpec grid_;
  double bound_ = 0.0;
  std::shared_ptr<const LocalizedField> target_;
};

/// One-shot application (prepares on the field's own grid).
std::vector<double> apply(const FunctionalSpec& spec, const LocalizedField& f);

}  // namespace berrylab
