#include "berrylab/field_source.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "berrylab/errors.hpp"

namespace berrylab {

namespace {

void check_point(int dimension, std::span<const double> point) {
  if (static_cast<int>(point.size()) != dimension) {
    throw DomainError("point has " + std::to_string(point.size()) + " coordinates, field dimension is " +
                      std::to_string(dimension));
  }
  for (double v : point) {
    if (!std::isfinite(v)) throw DomainError("point coordinates must be finite");
  }
}

double norm(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) s += v * v;
  return std::sqrt(s);
}

}  // namespace

void check_in_domain(const FieldSource& source, std::span<const double> point) {
  check_point(source.dimension(), point);
  const double radius = source.domain_radius();
  if (norm(point) > radius * (1.0 + 1e-12)) {
    throw DomainError("point outside the accuracy domain (radius " + std::to_string(radius) + ")");
  }
}

CosineSum::CosineSum(int dimension, std::vector<CosineTerm> terms, std::string provenance)
    : dimension_(dimension), terms_(std::move(terms)), provenance_(std::move(provenance)) {
  if (dimension < 1 || dimension > kMaxDimension) throw DomainError("cosine sum dimension must be 1..3");
}

Jet CosineSum::evaluate(std::span<const double> point, int order) const {
  check_point(dimension_, point);
  const MultiIndexTable& table = MultiIndexTable::get(dimension_, order);
  Jet out(table);
  // Taylor coefficient of alpha: a * omega^alpha / alpha! * cos^{(|alpha|)}(phase)
  std::vector<double> monomial(table.size());
  for (const CosineTerm& t : terms_) {
    double arg = t.phase;
    for (int i = 0; i < dimension_; ++i) arg += t.frequency[static_cast<std::size_t>(i)] * point[static_cast<std::size_t>(i)];
    const double c = std::cos(arg);
    const double s = std::sin(arg);
    const std::array<double, 4> cyc{c, -s, -c, s};
    for (std::size_t k = 0; k < table.size(); ++k) {
      const MultiIndex& alpha = table.index(k);
      double m = t.amplitude;
      for (int i = 0; i < dimension_; ++i) {
        for (int e = 0; e < alpha[static_cast<std::size_t>(i)]; ++e) m *= t.frequency[static_cast<std::size_t>(i)];
      }
      out.coefficient(k) += m * cyc[static_cast<std::size_t>(table.degree(k) % 4)] / table.factorial(k);
    }
  }
  return out;
}

double CosineSum::value(std::span<const double> point) const {
  check_point(dimension_, point);
  double sum = 0.0;
  for (const CosineTerm& t : terms_) {
    double arg = t.phase;
    for (int i = 0; i < dimension_; ++i) arg += t.frequency[static_cast<std::size_t>(i)] * point[static_cast<std::size_t>(i)];
    sum += t.amplitude * std::cos(arg);
  }
  return sum;
}

JetFunction::JetFunction(int dimension, Body body, std::string provenance)
    : dimension_(dimension), body_(std::move(body)), provenance_(std::move(provenance)) {
  if (dimension < 1 || dimension > kMaxDimension) throw DomainError("field dimension must be 1..3");
}

Jet JetFunction::evaluate(std::span<const double> point, int order) const {
  check_point(dimension_, point);
  const MultiIndexTable& table = MultiIndexTable::get(dimension_, order);
  const std::vector<Jet> y = coordinate_jets(table, point);
  return body_(y);
}

ShiftedField::ShiftedField(SourcePtr source, std::span<const double> shift) : source_(std::move(source)) {
  if (!source_) throw DomainError("shifted field needs a source");
  check_point(source_->dimension(), shift);
  std::copy(shift.begin(), shift.end(), shift_.begin());
}

Point ShiftedField::shifted(std::span<const double> point) const {
  check_point(dimension(), point);
  Point p{};
  for (std::size_t i = 0; i < point.size(); ++i) p[i] = point[i] + shift_[i];
  return p;
}

double ShiftedField::domain_radius() const {
  const double r = source_->domain_radius();
  if (!std::isfinite(r)) return r;
  return std::max(0.0, r - norm(std::span<const double>(shift_.data(), static_cast<std::size_t>(dimension()))));
}

Jet ShiftedField::evaluate(std::span<const double> point, int order) const {
  const Point p = shifted(point);
  const std::span<const double> q(p.data(), point.size());
  check_in_domain(*source_, q);
  return source_->evaluate(q, order);
}

double ShiftedField::value(std::span<const double> point) const {
  const Point p = shifted(point);
  const std::span<const double> q(p.data(), point.size());
  check_in_domain(*source_, q);
  return source_->value(q);
}

std::string ShiftedField::provenance() const {
  std::ostringstream os;
  os << source_->provenance() << ";shift=(";
  for (int i = 0; i < dimension(); ++i) os << (i ? "," : "") << shift_[static_cast<std::size_t>(i)];
  os << ")";
  return os.str();
}

ScaledField::ScaledField(SourcePtr source, double scale) : source_(std::move(source)), scale_(scale) {
  if (!source_) throw DomainError("scaled field needs a source");
}

Jet ScaledField::evaluate(std::span<const double> point, int order) const {
  return source_->evaluate(point, order) * scale_;
}

std::string ScaledField::provenance() const {
  std::ostringstream os;
  os << source_->provenance() << ";scale=" << scale_;
  return os.str();
}

SumField::SumField(SourcePtr a, SourcePtr b) : a_(std::move(a)), b_(std::move(b)) {
  if (!a_ || !b_) throw DomainError("sum field needs two sources");
  if (a_->dimension() != b_->dimension()) throw DomainError("sum field dimensions differ");
}

double SumField::domain_radius() const { return std::min(a_->domain_radius(), b_->domain_radius()); }

Jet SumField::evaluate(std::span<const double> point, int order) const {
  return a_->evaluate(point, order) + b_->evaluate(point, order);
}

std::string SumField::provenance() const { return a_->provenance() + "+" + b_->provenance(); }

}  // namespace berrylab

namespace berrylab {

DerivativeTable evaluate_points(const FieldSource& source, std::span<const Point> points, int order) {
  if (order < 0 || order > kMaxUserDerivativeOrder) {
    throw DomainError("derivative order must be in 0..4, got " + std::to_string(order));
  }
  DerivativeTable out;
  out.dimension = source.dimension();
  out.order = order;
  out.points.assign(points.begin(), points.end());
  const std::size_t stride = out.stride();
  out.data.reserve(points.size() * stride);
  for (const Point& p : points) {
    const std::span<const double> q(p.data(), static_cast<std::size_t>(out.dimension));
    check_in_domain(source, q);
    const Jet j = source.evaluate(q, order);
    for (std::size_t k = 0; k < stride; ++k) out.data.push_back(j.derivative(k));
  }
  return out;
}

}  // namespace berrylab
