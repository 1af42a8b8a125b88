#include "berrylab/jet.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

#include "berrylab/errors.hpp"

namespace berrylab {

namespace {

void enumerate_degree(int dimension, int degree, int axis, MultiIndex& current,
                      std::vector<MultiIndex>& out) {
  if (axis == dimension - 1) {
    current[static_cast<std::size_t>(axis)] = degree;
    out.push_back(current);
    current[static_cast<std::size_t>(axis)] = 0;
    return;
  }
  for (int k = degree; k >= 0; --k) {
    current[static_cast<std::size_t>(axis)] = k;
    enumerate_degree(dimension, degree - k, axis + 1, current, out);
  }
  current[static_cast<std::size_t>(axis)] = 0;
}

}  // namespace

MultiIndexTable::MultiIndexTable(int dimension, int order) : dimension_(dimension), order_(order) {
  for (int k = 0; k <= order; ++k) {
    MultiIndex current{0, 0, 0};
    enumerate_degree(dimension, k, 0, current, indices_);
    degree_end_.push_back(indices_.size());
  }
  for (const auto& alpha : indices_) {
    int deg = 0;
    double fact = 1.0;
    for (int a : alpha) {
      deg += a;
      for (int j = 2; j <= a; ++j) fact *= j;
    }
    degrees_.push_back(deg);
    factorials_.push_back(fact);
  }
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    for (std::size_t j = 0; j < indices_.size(); ++j) {
      if (degrees_[i] + degrees_[j] > order) continue;
      MultiIndex sum{};
      for (std::size_t a = 0; a < sum.size(); ++a) sum[a] = indices_[i][a] + indices_[j][a];
      products_.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j),
                           static_cast<std::uint16_t>(position(sum))});
    }
  }
}

const MultiIndexTable& MultiIndexTable::get(int dimension, int order) {
  if (dimension < 1 || dimension > kMaxDimension) {
    throw DomainError("jet dimension must be in 1..3, got " + std::to_string(dimension));
  }
  if (order < 0 || order > kMaxJetOrder) {
    throw DomainError("jet order must be in 0..8, got " + std::to_string(order));
  }
  static std::once_flag once;
  static std::vector<std::unique_ptr<MultiIndexTable>> tables;
  std::call_once(once, [] {
    for (int d = 1; d <= kMaxDimension; ++d) {
      for (int n = 0; n <= kMaxJetOrder; ++n) {
        tables.push_back(std::unique_ptr<MultiIndexTable>(new MultiIndexTable(d, n)));
      }
    }
  });
  return *tables[static_cast<std::size_t>((dimension - 1) * (kMaxJetOrder + 1) + order)];
}

std::size_t MultiIndexTable::position(const MultiIndex& alpha) const {
  int deg = 0;
  for (int a = 0; a < kMaxDimension; ++a) {
    if (alpha[static_cast<std::size_t>(a)] < 0) throw DomainError("negative multi-index entry");
    if (a >= dimension_ && alpha[static_cast<std::size_t>(a)] != 0) {
      throw DomainError("multi-index has entries beyond the dimension");
    }
    deg += alpha[static_cast<std::size_t>(a)];
  }
  if (deg > order_) throw DomainError("multi-index degree exceeds jet order");
  const std::size_t begin = deg == 0 ? 0 : degree_end_[static_cast<std::size_t>(deg - 1)];
  const std::size_t end = degree_end_[static_cast<std::size_t>(deg)];
  for (std::size_t i = begin; i < end; ++i) {
    if (indices_[i] == alpha) return i;
  }
  throw DomainError("multi-index not found");
}

std::string MultiIndexTable::label(std::size_t i) const {
  std::string s = "d";
  for (int a = 0; a < dimension_; ++a) s += std::to_string(indices_[i][static_cast<std::size_t>(a)]);
  return s;
}

Jet::Jet(const MultiIndexTable& table, double value) : table_(&table), c_(table.size(), 0.0) {
  c_[0] = value;
}

Jet Jet::variable(const MultiIndexTable& table, int axis, double value) {
  Jet j(table, value);
  if (table.order() >= 1) {
    MultiIndex e{0, 0, 0};
    e[static_cast<std::size_t>(axis)] = 1;
    j.c_[table.position(e)] = 1.0;
  }
  return j;
}

Jet& Jet::operator+=(const Jet& other) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Jet& Jet::operator*=(const Jet& other) {
  *this = *this * other;
  return *this;
}

void Jet::add_product(const Jet& a, const Jet& b, double scale) {
  for (const auto& p : table_->products()) c_[p.out] += scale * a.c_[p.lhs] * b.c_[p.rhs];
}

void Jet::add_scaled(const Jet& a, double s) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += s * a.c_[i];
}

void Jet::set_zero() { std::fill(c_.begin(), c_.end(), 0.0); }

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator*(const Jet& a, const Jet& b) {
  Jet out(a.table());
  out.add_product(a, b);
  return out;
}

Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator-(Jet a) { return a *= -1.0; }

Jet compose(std::span<const double> derivatives, const Jet& u) {
  const int n = u.table().order();
  Jet delta = u;
  delta.coefficient(0) = 0.0;
  auto taylor = [&](int k) {
    if (k >= static_cast<int>(derivatives.size())) return 0.0;
    double f = derivatives[static_cast<std::size_t>(k)];
    for (int j = 2; j <= k; ++j) f /= j;
    return f;
  };
  Jet result(u.table(), taylor(n));
  for (int k = n - 1; k >= 0; --k) {
    result = result * delta;
    result.coefficient(0) += taylor(k);
  }
  return result;
}

namespace {

std::array<double, kMaxJetOrder + 1> trig_derivatives(double x, bool cosine) {
  const double c = std::cos(x);
  const double s = std::sin(x);
  // cos: c, -s, -c, s ; sin: s, c, -s, -c
  const std::array<double, 4> cyc = cosine ? std::array<double, 4>{c, -s, -c, s}
                                           : std::array<double, 4>{s, c, -s, -c};
  std::array<double, kMaxJetOrder + 1> d{};
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = cyc[k % 4];
  return d;
}

}  // namespace

Jet cos(const Jet& u) {
  const auto d = trig_derivatives(u.value(), true);
  return compose(d, u);
}

Jet sin(const Jet& u) {
  const auto d = trig_derivatives(u.value(), false);
  return compose(d, u);
}

Jet exp(const Jet& u) {
  std::array<double, kMaxJetOrder + 1> d{};
  d.fill(std::exp(u.value()));
  return compose(d, u);
}

Jet sqrt(const Jet& u) {
  const double x = u.value();
  if (!(x > 0.0)) throw DomainError("sqrt of a jet requires a positive value");
  std::array<double, kMaxJetOrder + 1> d{};
  double coef = 1.0;
  double power = 0.5;
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = coef * std::pow(x, power);
    coef *= power;
    power -= 1.0;
  }
  return compose(d, u);
}

Jet reciprocal(const Jet& u) {
  const double x = u.value();
  if (x == 0.0) throw DomainError("reciprocal of a jet with zero value");
  std::array<double, kMaxJetOrder + 1> d{};
  double v = 1.0 / x;
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = v;
    v *= -static_cast<double>(k + 1) / x;
  }
  return compose(d, u);
}

std::vector<Jet> coordinate_jets(const MultiIndexTable& table, std::span<const double> point) {
  std::vector<Jet> out;
  out.reserve(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    out.push_back(Jet::variable(table, static_cast<int>(i), point[i]));
  }
  return out;
}

}  // namespace berrylab
