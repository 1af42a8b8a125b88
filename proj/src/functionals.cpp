#include "berrylab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "berrylab/berry_field.hpp"
#include "berrylab/errors.hpp"

namespace berrylab {

namespace {

double bump(double s) { return s <= 0.0 ? 0.0 : std::exp(-1.0 / s); }

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

const char* functional_name(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::PointEval: return "point-eval";
    case FunctionalKind::Moment: return "moment";
    case FunctionalKind::PairProduct: return "pair-product";
    case FunctionalKind::ChiNorm: return "chi-norm";
    case FunctionalKind::NodalCount: return "nodal-count";
  }
  return "unknown";
}

double chi(double t, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("chi needs epsilon > 0");
  if (!(t >= 0.0)) throw DomainError("chi needs t >= 0");
  if (t <= epsilon / 2.0) return 1.0;
  if (t >= epsilon) return 0.0;
  const double u = 2.0 * t / epsilon - 1.0;
  const double a = bump(u);
  const double b = bump(1.0 - u);
  return 1.0 - a / (a + b);
}

int required_order(const FunctionalSpec& spec) { return spec.kind == FunctionalKind::ChiNorm ? spec.order : 0; }

void validate_functional(const FunctionalSpec& spec) {
  switch (spec.kind) {
    case FunctionalKind::PointEval:
      if (spec.points.empty()) throw DomainError("point-eval needs at least one point");
      break;
    case FunctionalKind::Moment:
      if (spec.points.empty()) throw DomainError("moment needs a point");
      if (spec.power < 1 || spec.power > 4) throw DomainError("moment power must be in 1..4");
      break;
    case FunctionalKind::PairProduct:
      if (spec.points.size() < 2) throw DomainError("pair-product needs two points");
      break;
    case FunctionalKind::ChiNorm:
      if (!spec.target) throw DomainError("chi-norm needs a target field");
      if (!(spec.epsilon > 0.0)) throw DomainError("chi-norm needs epsilon > 0");
      if (spec.order < 0 || spec.order > kMaxUserDerivativeOrder) throw DomainError("chi-norm order must be in 0..4");
      if (!(spec.radius > 0.0)) throw DomainError("chi-norm radius must be positive");
      break;
    case FunctionalKind::NodalCount:
      if (!std::isfinite(spec.threshold)) throw DomainError("nodal-count threshold must be finite");
      break;
  }
}

NodalCounts nodal_component_count(const LocalizedField& f, double threshold) {
  if (f.dimension() != 2 || f.grid().layout != GridLayout::Ball) {
    throw PreconditionError("nodal counting needs a two-dimensional ball grid");
  }
  const int n = f.grid().resolution;
  std::vector<long long> at(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < f.node_count(); ++i) {
    const auto& ix = f.lattice(i);
    at[static_cast<std::size_t>(ix[0]) * static_cast<std::size_t>(n) + static_cast<std::size_t>(ix[1])] =
        static_cast<long long>(i);
  }
  auto sign = [&](std::size_t i) {
    const double v = f.value(i) - threshold;
    return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
  };
  UnionFind uf(f.node_count());
  for (std::size_t i = 0; i < f.node_count(); ++i) {
    const int s = sign(i);
    if (s == 0) continue;
    const auto& ix = f.lattice(i);
    const int nb[2][2] = {{ix[0] + 1, ix[1]}, {ix[0], ix[1] + 1}};
    for (const auto& q : nb) {
      if (q[0] >= n || q[1] >= n) continue;
      const long long j = at[static_cast<std::size_t>(q[0]) * static_cast<std::size_t>(n) + static_cast<std::size_t>(q[1])];
      if (j < 0) continue;
      if (sign(static_cast<std::size_t>(j)) == s) uf.unite(i, static_cast<std::size_t>(j));
    }
  }
  NodalCounts counts;
  for (std::size_t i = 0; i < f.node_count(); ++i) {
    const int s = sign(i);
    if (s == 0 || uf.find(i) != i) continue;
    (s > 0 ? counts.positive : counts.negative) += 1;
  }
  return counts;
}

PreparedFunctional::PreparedFunctional(FunctionalSpec spec, const GridSpec& grid)
    : spec_(std::move(spec)), grid_(grid) {
  validate_functional(spec_);
  switch (spec_.kind) {
    case FunctionalKind::PointEval: bound_ = kClip; break;
    case FunctionalKind::Moment: bound_ = std::pow(kClip, spec_.power); break;
    case FunctionalKind::PairProduct: bound_ = kClip * kClip; break;
    case FunctionalKind::ChiNorm: {
      bound_ = 1.0;
      if (spec_.target->dimension() != grid.dimension) throw DomainError("chi-norm target dimension differs from grid");
      GridSpec g = grid;
      g.order = spec_.order;
      target_ = std::make_shared<LocalizedField>(sample(*spec_.target, g));
      break;
    }
    case FunctionalKind::NodalCount: {
      if (grid.dimension != 2 || grid.layout != GridLayout::Ball) {
        throw PreconditionError("nodal counting needs a two-dimensional ball grid");
      }
      // At most one component per grid node.
      bound_ = static_cast<double>(grid.resolution) * grid.resolution;
      break;
    }
  }
}

std::size_t PreparedFunctional::output_size() const {
  switch (spec_.kind) {
    case FunctionalKind::PointEval: return spec_.points.size();
    case FunctionalKind::NodalCount: return 2;
    default: return 1;
  }
}

std::vector<std::string> PreparedFunctional::output_names() const {
  switch (spec_.kind) {
    case FunctionalKind::PointEval: {
      std::vector<std::string> names;
      for (std::size_t i = 0; i < spec_.points.size(); ++i) names.push_back("value" + std::to_string(i));
      return names;
    }
    case FunctionalKind::NodalCount: return {"positive", "negative"};
    default: return {functional_name(spec_.kind)};
  }
}

std::string PreparedFunctional::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << functional_name(spec_.kind);
  switch (spec_.kind) {
    case FunctionalKind::Moment: os << ":power=" << spec_.power; break;
    case FunctionalKind::ChiNorm:
      os << ":order=" << spec_.order << ":epsilon=" << spec_.epsilon << ":target=" << spec_.target->provenance();
      break;
    case FunctionalKind::NodalCount: os << ":threshold=" << spec_.threshold; break;
    default: break;
  }
  return os.str();
}

std::size_t PreparedFunctional::node_of(const LocalizedField& f, const Point& p) const {
  for (std::size_t i = 0; i < f.node_count(); ++i) {
    bool same = true;
    for (int a = 0; a < f.dimension(); ++a) {
      if (std::fabs(f.node(i)[static_cast<std::size_t>(a)] - p[static_cast<std::size_t>(a)]) > 1e-12) {
        same = false;
        break;
      }
    }
    if (same) return i;
  }
  throw PreconditionError("functional point is not a grid node");
}

std::vector<double> PreparedFunctional::apply(const LocalizedField& f) const {
  if (f.order() < required_order(spec_)) throw PreconditionError("field lacks the derivative depth the functional needs");
  switch (spec_.kind) {
    case FunctionalKind::PointEval: {
      std::vector<double> out;
      for (const Point& p : spec_.points) out.push_back(clip_value(f.value(node_of(f, p))));
      return out;
    }
    case FunctionalKind::Moment:
      return {std::pow(clip_value(f.value(node_of(f, spec_.points[0]))), spec_.power)};
    case FunctionalKind::PairProduct:
      return {clip_value(f.value(node_of(f, spec_.points[0]))) * clip_value(f.value(node_of(f, spec_.points[1])))};
    case FunctionalKind::ChiNorm: {
      if (f.grid().layout != target_->grid().layout || f.node_count() != target_->node_count()) {
        throw DomainError("incompatible grids");
      }
      const std::size_t entries = f.table().count_up_to(spec_.order);
      const std::size_t target_stride = target_->stride();
      const double limit = spec_.radius * (1.0 + 1e-12);
      double sup = 0.0;
      for (std::size_t i = 0; i < f.node_count(); ++i) {
        if (f.node_radius(i) > limit) continue;
        for (std::size_t k = 0; k < entries; ++k) {
          sup = std::max(sup, std::fabs(f.derivative(i, k) - target_->data()[i * target_stride + k]));
        }
      }
      return {chi(sup, spec_.epsilon)};
    }
    case FunctionalKind::NodalCount: {
      const NodalCounts c = nodal_component_count(f, spec_.threshold);
      return {static_cast<double>(c.positive), static_cast<double>(c.negative)};
    }
  }
  return {};
}

std::vector<double> apply(const FunctionalSpec& spec, const LocalizedField& f) {
  const PreparedFunctional prepared(spec, f.grid());
  return prepared.apply(f);
}

}  // namespace berrylab
