#include "berrylab/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "berrylab/errors.hpp"
#include "berrylab/quadrature.hpp"
#include "berrylab/special_functions.hpp"

namespace berrylab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4.0 * kPi * kPi;
constexpr double kEigenTolerance = 1e-12;

double torus_lambda(const ManifoldSpec& spec, const LatticeVector& m) {
  double q = 0.0;
  for (std::size_t i = 0; i < spec.sides.size(); ++i) {
    const double t = static_cast<double>(m[i]) / spec.sides[i];
    q += t * t;
  }
  return kFourPiSq * q;
}

bool is_representative(const LatticeVector& m, int d) {
  for (int i = 0; i < d; ++i) {
    if (m[static_cast<std::size_t>(i)] > 0) return true;
    if (m[static_cast<std::size_t>(i)] < 0) return false;
  }
  return false;
}

double dot3(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Derivatives in s of cos(sqrt s) and sin(sqrt s) / sqrt s, both entire in s.
std::array<double, kMaxJetOrder + 1> entire_derivatives(double s0, bool sine_kind) {
  std::array<double, kMaxJetOrder + 1> out{};
  for (int j = 0; j <= kMaxJetOrder; ++j) {
    double sum = 0.0;
    for (int k = j; k < j + 60; ++k) {
      // a_k = (-1)^k / (2k)! or (-1)^k / (2k + 1)!
      const double log_fact = std::lgamma(2.0 * k + (sine_kind ? 2.0 : 1.0));
      double term = std::exp(std::lgamma(k + 1.0) - std::lgamma(k - j + 1.0) - log_fact);
      if (k > j) {
        if (s0 == 0.0) break;
        term *= std::pow(s0, k - j);
      }
      sum += (k % 2 == 0 ? term : -term);
      if (std::fabs(term) < 1e-18 * std::max(1.0, std::fabs(sum)) && k > j + 2) break;
    }
    out[static_cast<std::size_t>(j)] = sum;
  }
  return out;
}

std::array<Point, 2> pole_tangent(int chart) {
  if (chart == 0) return {Point{1.0, 0.0, 0.0}, Point{0.0, 1.0, 0.0}};
  return {Point{1.0, 0.0, 0.0}, Point{0.0, -1.0, 0.0}};
}

Point pole(int chart) { return chart == 0 ? Point{0.0, 0.0, 1.0} : Point{0.0, 0.0, -1.0}; }

std::array<Point, kMaxDimension> sphere_frame(int chart, const Point& q) {
  // Pushforward of the azimuthal-equidistant coordinates centred at the pole.
  const Point P = pole(chart);
  const auto basis = pole_tangent(chart);
  const double c = std::clamp(dot3(P, q), -1.0, 1.0);
  const double theta = std::acos(c);
  Point u{0.0, 0.0, 0.0};
  Point perp{q[0] - c * P[0], q[1] - c * P[1], q[2] - c * P[2]};
  const double pn = std::sqrt(dot3(perp, perp));
  if (pn > 0.0) {
    u[0] = theta * dot3(perp, basis[0]) / pn;
    u[1] = theta * dot3(perp, basis[1]) / pn;
  }
  const MultiIndexTable& table = MultiIndexTable::get(2, 1);
  const std::vector<Jet> uj = coordinate_jets(table, std::span<const double>(u.data(), 2));
  Jet s = uj[0] * uj[0];
  s.add_product(uj[1], uj[1]);
  const Jet C = compose(entire_derivatives(s.value(), false), s);
  const Jet S = compose(entire_derivatives(s.value(), true), s);
  std::array<Point, kMaxDimension> pushed{};
  for (std::size_t a = 0; a < 3; ++a) {
    Jet w = uj[0] * basis[0][a];
    w.add_scaled(uj[1], basis[1][a]);
    Jet comp = C * P[a];
    comp.add_product(S, w);
    pushed[0][a] = comp.derivative(1);
    pushed[1][a] = comp.derivative(2);
  }
  // Gram-Schmidt.
  Point e1 = pushed[0];
  const double n1 = std::sqrt(dot3(e1, e1));
  for (double& v : e1) v /= n1;
  Point e2 = pushed[1];
  const double proj = dot3(e2, e1);
  for (std::size_t a = 0; a < 3; ++a) e2[a] -= proj * e1[a];
  // Remove any normal component left by rounding, then normalize.
  const double normal = dot3(e2, q);
  for (std::size_t a = 0; a < 3; ++a) e2[a] -= normal * q[a];
  const double n2 = std::sqrt(dot3(e2, e2));
  for (double& v : e2) v /= n2;
  return {e1, e2, Point{}};
}

void check_spec(const ManifoldSpec& spec) {
  if (spec.kind == ManifoldKind::Sphere) return;
  if (spec.sides.size() != 2 && spec.sides.size() != 3) throw DomainError("torus dimension must be 2 or 3");
  for (double a : spec.sides) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("torus side lengths must be positive and finite");
  }
}

}  // namespace

ManifoldSpec ManifoldSpec::torus(std::vector<double> sides, bool irrational) {
  ManifoldSpec s;
  s.kind = ManifoldKind::Torus;
  s.sides = std::move(sides);
  s.irrational = irrational;
  check_spec(s);
  return s;
}

ManifoldSpec ManifoldSpec::sphere() {
  ManifoldSpec s;
  s.kind = ManifoldKind::Sphere;
  return s;
}

int ManifoldSpec::dimension() const {
  return kind == ManifoldKind::Sphere ? 2 : static_cast<int>(sides.size());
}

int ManifoldSpec::ambient_dimension() const { return kind == ManifoldKind::Sphere ? 3 : dimension(); }

double ManifoldSpec::volume() const {
  if (kind == ManifoldKind::Sphere) return 4.0 * kPi;
  double v = 1.0;
  for (double a : sides) v *= a;
  return v;
}

std::string ManifoldSpec::describe() const {
  if (kind == ManifoldKind::Sphere) return "sphere";
  std::ostringstream os;
  os.precision(17);
  os << "torus(";
  for (std::size_t i = 0; i < sides.size(); ++i) os << (i ? "," : "") << sides[i];
  os << ")";
  if (irrational) os << ":irrational";
  return os.str();
}

EigenvalueEntry sphere_degree(int degree) {
  if (degree < 1) throw DomainError("sphere eigenspaces start at degree 1");
  EigenvalueEntry e;
  e.degree = degree;
  e.lambda = static_cast<double>(degree) * (degree + 1.0);
  e.multiplicity = 2 * degree + 1;
  return e;
}

std::vector<EigenvalueEntry> eigenvalues_up_to(const ManifoldSpec& spec, double lambda_max) {
  check_spec(spec);
  if (!(lambda_max > 0.0) || !std::isfinite(lambda_max)) throw DomainError("lambda_max must be positive");
  std::vector<EigenvalueEntry> out;
  if (spec.kind == ManifoldKind::Sphere) {
    std::size_t modes = 0;
    for (int l = 1; static_cast<double>(l) * (l + 1.0) <= lambda_max; ++l) {
      modes += static_cast<std::size_t>(2 * l + 1);
      if (modes > kEnumerationCap) throw PreconditionError("enumeration cap exceeded: more than 1e6 modes");
      out.push_back(sphere_degree(l));
    }
    return out;
  }
  const int d = spec.dimension();
  std::array<long long, kMaxDimension> bound{0, 0, 0};
  double box = 1.0;
  for (int i = 0; i < d; ++i) {
    bound[static_cast<std::size_t>(i)] =
        static_cast<long long>(std::floor(spec.sides[static_cast<std::size_t>(i)] * std::sqrt(lambda_max) / (2.0 * kPi)));
    box *= 2.0 * static_cast<double>(bound[static_cast<std::size_t>(i)]) + 1.0;
  }
  if (box > 64.0 * static_cast<double>(kEnumerationCap)) {
    throw PreconditionError("enumeration cap exceeded: more than 1e6 modes");
  }
  std::vector<std::pair<double, LatticeVector>> reps;
  std::size_t total = 0;
  LatticeVector m{0, 0, 0};
  const long long b2 = d > 2 ? bound[2] : 0;
  for (m[0] = -bound[0]; m[0] <= bound[0]; ++m[0]) {
    for (m[1] = -bound[1]; m[1] <= bound[1]; ++m[1]) {
      for (m[2] = -b2; m[2] <= b2; ++m[2]) {
        if (!is_representative(m, d)) continue;
        const double lam = torus_lambda(spec, m);
        if (lam > lambda_max * (1.0 + kEigenTolerance)) continue;
        total += 2;
        if (total > kEnumerationCap) throw PreconditionError("enumeration cap exceeded: more than 1e6 modes");
        reps.emplace_back(lam, m);
      }
    }
  }
  std::sort(reps.begin(), reps.end());
  for (const auto& [lam, vec] : reps) {
    if (out.empty() || lam > out.back().lambda * (1.0 + kEigenTolerance)) {
      EigenvalueEntry e;
      e.lambda = lam;
      out.push_back(e);
    }
    out.back().modes.push_back(vec);
    out.back().multiplicity += 2;
  }
  return out;
}

EigenvalueEntry eigenspace(const ManifoldSpec& spec, double lambda) {
  check_spec(spec);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("eigenvalue must be positive");
  if (spec.kind == ManifoldKind::Sphere) {
    const long long l = std::llround((-1.0 + std::sqrt(1.0 + 4.0 * lambda)) / 2.0);
    if (l < 1 || std::fabs(static_cast<double>(l) * (l + 1.0) - lambda) > 1e-9 * lambda) {
      throw DomainError("not a sphere eigenvalue: " + std::to_string(lambda));
    }
    return sphere_degree(static_cast<int>(l));
  }
  const int d = spec.dimension();
  const double target = lambda / kFourPiSq;  // sum (m_i / a_i)^2
  const double tol = kEigenTolerance * lambda;
  std::vector<LatticeVector> reps;
  auto consider = [&](const LatticeVector& m) {
    if (!is_representative(m, d)) return;
    if (std::fabs(torus_lambda(spec, m) - lambda) <= tol) reps.push_back(m);
  };
  auto last_axis = [&](LatticeVector m, double rest) {
    // Solve (m_last / a_last)^2 = rest.
    const std::size_t k = static_cast<std::size_t>(d - 1);
    if (rest < -1e-9 * target) return;
    const double v = spec.sides[k] * std::sqrt(std::max(0.0, rest));
    const long long lo = static_cast<long long>(std::floor(v));
    for (long long c = lo; c <= lo + 1; ++c) {
      for (long long sgn : {1LL, -1LL}) {
        if (c == 0 && sgn < 0) continue;
        m[k] = sgn * c;
        consider(m);
      }
    }
  };
  const long long b0 = static_cast<long long>(std::floor(spec.sides[0] * std::sqrt(target))) + 1;
  std::size_t visited = 0;
  for (long long m0 = -b0; m0 <= b0; ++m0) {
    const double r0 = target - std::pow(static_cast<double>(m0) / spec.sides[0], 2);
    if (r0 < -1e-9 * target) continue;
    if (d == 2) {
      last_axis({m0, 0, 0}, r0);
      continue;
    }
    const long long b1 = static_cast<long long>(std::floor(spec.sides[1] * std::sqrt(std::max(0.0, r0)))) + 1;
    for (long long m1 = -b1; m1 <= b1; ++m1) {
      if (++visited > 64 * kEnumerationCap) throw PreconditionError("enumeration cap exceeded in shell search");
      last_axis({m0, m1, 0}, r0 - std::pow(static_cast<double>(m1) / spec.sides[1], 2));
    }
  }
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  if (reps.empty()) throw DomainError("not a torus eigenvalue: " + std::to_string(lambda));
  if (2 * reps.size() > kEnumerationCap) throw PreconditionError("enumeration cap exceeded: more than 1e6 modes");
  EigenvalueEntry e;
  e.lambda = torus_lambda(spec, reps.front());
  e.modes = std::move(reps);
  e.multiplicity = static_cast<int>(2 * e.modes.size());
  return e;
}

std::vector<Chart> chart_cover(const ManifoldSpec& spec) {
  check_spec(spec);
  if (spec.kind == ManifoldKind::Torus) return {{0, "global"}};
  return {{0, "north"}, {1, "south"}};
}

int chart_of(const ManifoldSpec& spec, std::span<const double> point) {
  if (spec.kind == ManifoldKind::Torus) return 0;
  if (point.size() != 3) throw DomainError("sphere points have three coordinates");
  if (point[2] > 0.0) return 0;
  if (point[2] < 0.0) return 1;
  return -1;
}

BasePoint make_base_point(const ManifoldSpec& spec, std::span<const double> position) {
  check_spec(spec);
  BasePoint b;
  const int n = spec.ambient_dimension();
  if (static_cast<int>(position.size()) != n) throw DomainError("base point has the wrong number of coordinates");
  for (double v : position) {
    if (!std::isfinite(v)) throw DomainError("base point coordinates must be finite");
  }
  if (spec.kind == ManifoldKind::Torus) {
    for (int i = 0; i < n; ++i) {
      const double a = spec.sides[static_cast<std::size_t>(i)];
      double x = std::fmod(position[static_cast<std::size_t>(i)], a);
      if (x < 0.0) x += a;
      if (x >= a) x -= a;
      b.position[static_cast<std::size_t>(i)] = x;
      b.frame[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    }
    b.chart = 0;
    return b;
  }
  const double norm = std::sqrt(position[0] * position[0] + position[1] * position[1] + position[2] * position[2]);
  if (std::fabs(norm - 1.0) > 1e-12) throw DomainError("sphere base point must be a unit vector");
  for (int i = 0; i < 3; ++i) b.position[static_cast<std::size_t>(i)] = position[static_cast<std::size_t>(i)];
  b.chart = chart_of(spec, position);
  if (b.chart < 0) throw DomainError("base point lies on the chart boundary (equator)");
  b.frame = sphere_frame(b.chart, b.position);
  return b;
}

BasePoint random_base_point(const ManifoldSpec& spec, int chart, Engine& engine) {
  check_spec(spec);
  if (spec.kind == ManifoldKind::Torus) {
    if (chart > 0) throw DomainError("torus has a single chart");
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Point x{};
    for (int i = 0; i < spec.dimension(); ++i) {
      x[static_cast<std::size_t>(i)] = uniform(engine) * spec.sides[static_cast<std::size_t>(i)];
    }
    return make_base_point(spec, std::span<const double>(x.data(), static_cast<std::size_t>(spec.dimension())));
  }
  if (chart > 1) throw DomainError("sphere charts are 0 (north) and 1 (south)");
  std::normal_distribution<double> normal;
  for (;;) {
    Point x{normal(engine), normal(engine), normal(engine)};
    const double n = std::sqrt(dot3(x, x));
    if (n < 1e-12) continue;
    for (double& v : x) v /= n;
    if (x[2] == 0.0) continue;
    if ((chart == 0 && x[2] < 0.0) || (chart == 1 && x[2] > 0.0)) x[2] = -x[2];
    return make_base_point(spec, x);
  }
}

BasePoint random_base_point(const ManifoldSpec& spec, int chart, std::uint64_t seed) {
  Engine engine = make_engine(seed);
  return random_base_point(spec, chart, engine);
}

Point exp_map(const ManifoldSpec& spec, const BasePoint& p, std::span<const double> v) {
  const int d = spec.dimension();
  if (static_cast<int>(v.size()) != d) throw DomainError("tangent vector has the wrong dimension");
  if (spec.kind == ManifoldKind::Torus) {
    Point x{};
    for (int i = 0; i < d; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      double t = p.position[k];
      for (int j = 0; j < d; ++j) t += v[static_cast<std::size_t>(j)] * p.frame[static_cast<std::size_t>(j)][k];
      const double a = spec.sides[k];
      t = std::fmod(t, a);
      if (t < 0.0) t += a;
      if (t >= a) t -= a;
      x[k] = t;
    }
    return x;
  }
  const double norm = std::hypot(v[0], v[1]);
  if (!(norm < kPi)) throw DomainError("sphere exp_map needs |v| < pi");
  Point w{};
  for (std::size_t a = 0; a < 3; ++a) w[a] = v[0] * p.frame[0][a] + v[1] * p.frame[1][a];
  const double c = std::cos(norm);
  const double s = norm == 0.0 ? 1.0 : std::sin(norm) / norm;
  Point x{};
  for (std::size_t a = 0; a < 3; ++a) x[a] = c * p.position[a] + s * w[a];
  return x;
}

double geodesic_distance(const ManifoldSpec& spec, std::span<const double> a, std::span<const double> b) {
  if (spec.kind == ManifoldKind::Sphere) {
    const double c = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    const Point cross{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    return std::atan2(std::sqrt(dot3(cross, cross)), c);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < spec.sides.size(); ++i) {
    double d = std::fmod(std::fabs(a[i] - b[i]), spec.sides[i]);
    d = std::min(d, spec.sides[i] - d);
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<Jet> sphere_exp_jets(const BasePoint& p, std::span<const double> y, int order, double scale) {
  if (y.size() != 2) throw DomainError("sphere tangent vectors have two components");
  const double radius = scale * std::hypot(y[0], y[1]);
  if (!(radius < kPi)) throw DomainError("sphere exp_map needs |v| < pi");
  const MultiIndexTable& table = MultiIndexTable::get(2, order);
  const std::vector<Jet> yj = coordinate_jets(table, y);
  std::vector<Jet> w;
  for (std::size_t a = 0; a < 3; ++a) {
    Jet t = yj[0] * (scale * p.frame[0][a]);
    t.add_scaled(yj[1], scale * p.frame[1][a]);
    w.push_back(std::move(t));
  }
  Jet s(table);
  for (const Jet& c : w) s.add_product(c, c);
  const Jet C = compose(entire_derivatives(s.value(), false), s);
  const Jet S = compose(entire_derivatives(s.value(), true), s);
  std::vector<Jet> out;
  for (std::size_t a = 0; a < 3; ++a) {
    Jet comp = C * p.position[a];
    comp.add_product(S, w[a]);
    out.push_back(std::move(comp));
  }
  return out;
}

Eigenfunction::Eigenfunction(ManifoldSpec spec, EigenvalueEntry entry, std::vector<double> coefficients)
    : spec_(std::move(spec)), entry_(std::move(entry)), coefficients_(std::move(coefficients)) {
  check_spec(spec_);
  if (static_cast<int>(coefficients_.size()) != entry_.multiplicity) {
    throw DomainError("coefficient vector length " + std::to_string(coefficients_.size()) +
                      " does not match multiplicity " + std::to_string(entry_.multiplicity));
  }
  if (spec_.kind == ManifoldKind::Sphere && entry_.degree < 1) throw DomainError("sphere eigenspace needs a degree");
  if (spec_.kind == ManifoldKind::Torus && 2 * entry_.modes.size() != coefficients_.size()) {
    throw DomainError("torus eigenspace modes do not match the multiplicity");
  }
  for (double c : coefficients_) {
    if (!std::isfinite(c)) throw DomainError("eigenfunction coefficients must be finite");
  }
}

Eigenfunction Eigenfunction::make(const ManifoldSpec& spec, const EigenvalueEntry& entry,
                                  std::vector<double> coefficients) {
  double n2 = 0.0;
  for (double c : coefficients) n2 += c * c;
  if (!(n2 > 0.0)) throw DomainError("zero coefficient vector");
  const double inv = 1.0 / std::sqrt(n2);
  for (double& c : coefficients) c *= inv;
  return Eigenfunction(spec, entry, std::move(coefficients));
}

Eigenfunction Eigenfunction::raw(const ManifoldSpec& spec, const EigenvalueEntry& entry,
                                 std::vector<double> coefficients) {
  return Eigenfunction(spec, entry, std::move(coefficients));
}

std::string Eigenfunction::id() const {
  std::ostringstream os;
  os.precision(17);
  os << spec_.describe() << ":lambda=" << entry_.lambda;
  return os.str();
}

double Eigenfunction::value(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != spec_.ambient_dimension()) throw DomainError("point has the wrong dimension");
  if (spec_.kind == ManifoldKind::Torus) {
    double sum = 0.0;
    for (std::size_t k = 0; k < entry_.modes.size(); ++k) {
      double arg = 0.0;
      for (std::size_t i = 0; i < spec_.sides.size(); ++i) {
        arg += 2.0 * kPi * static_cast<double>(entry_.modes[k][i]) * point[i] / spec_.sides[i];
      }
      sum += std::sqrt(2.0) * (coefficients_[2 * k] * std::cos(arg) + coefficients_[2 * k + 1] * std::sin(arg));
    }
    return sum;
  }
  SphereHarmonicDegree h(entry_.degree);
  std::vector<double> y;
  h.evaluate_values(point, y);
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) sum += coefficients_[i] * y[i];
  return std::sqrt(4.0 * kPi) * sum;
}

std::vector<CosineTerm> Eigenfunction::torus_terms(const BasePoint& p, double scale) const {
  if (spec_.kind != ManifoldKind::Torus) throw DomainError("cosine form exists only on tori");
  const int d = spec_.dimension();
  std::vector<CosineTerm> terms;
  for (std::size_t k = 0; k < entry_.modes.size(); ++k) {
    CosineTerm t;
    double phase = 0.0;
    for (int i = 0; i < d; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      const double wave = 2.0 * kPi * static_cast<double>(entry_.modes[k][ii]) / spec_.sides[ii];
      phase += wave * p.position[ii];
      for (int j = 0; j < d; ++j) t.frequency[static_cast<std::size_t>(j)] += scale * wave * p.frame[static_cast<std::size_t>(j)][ii];
    }
    phase = std::remainder(phase, 2.0 * kPi);
    const double a = coefficients_[2 * k];
    const double b = coefficients_[2 * k + 1];
    if (a != 0.0) terms.push_back({t.frequency, std::sqrt(2.0) * a, phase});
    if (b != 0.0) terms.push_back({t.frequency, std::sqrt(2.0) * b, phase - kPi / 2.0});
  }
  return terms;
}

Jet Eigenfunction::pullback(const BasePoint& p, std::span<const double> y, int order, double scale) const {
  if (static_cast<int>(y.size()) != spec_.dimension()) throw DomainError("tangent point has the wrong dimension");
  if (spec_.kind == ManifoldKind::Torus) {
    const CosineSum sum(spec_.dimension(), torus_terms(p, scale), id());
    return sum.evaluate(y, order);
  }
  const std::vector<Jet> omega = sphere_exp_jets(p, y, order, scale);
  const SphereHarmonicDegree h(entry_.degree);
  return h.combine(omega, coefficients_) * std::sqrt(4.0 * kPi);
}

double Eigenfunction::eigen_residual(const BasePoint& p) const {
  const Point zero{};
  const int d = spec_.dimension();
  const Jet j = pullback(p, std::span<const double>(zero.data(), static_cast<std::size_t>(d)), 2, 1.0);
  const MultiIndexTable& t = j.table();
  double lap = 0.0;
  for (int i = 0; i < d; ++i) {
    MultiIndex alpha{0, 0, 0};
    alpha[static_cast<std::size_t>(i)] = 2;
    lap += j.derivative(t.position(alpha));
  }
  return std::fabs(lap + lambda() * j.value());
}

std::vector<WeightedBasePoint> quadrature_base_points(const ManifoldSpec& spec, int chart, int nodes) {
  check_spec(spec);
  if (nodes < 1) throw DomainError("quadrature needs at least one node per axis");
  std::vector<WeightedBasePoint> out;
  if (spec.kind == ManifoldKind::Torus) {
    const int d = spec.dimension();
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(nodes);
    const double w = 1.0 / static_cast<double>(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
      Point x{};
      std::size_t rest = idx;
      for (int i = 0; i < d; ++i) {
        const std::size_t k = rest % static_cast<std::size_t>(nodes);
        rest /= static_cast<std::size_t>(nodes);
        x[static_cast<std::size_t>(i)] = (static_cast<double>(k) + 0.5) / nodes * spec.sides[static_cast<std::size_t>(i)];
      }
      out.push_back({make_base_point(spec, std::span<const double>(x.data(), static_cast<std::size_t>(d))), w});
    }
    return out;
  }
  const QuadratureRule rule = gauss_legendre(nodes, 0.0, 1.0);
  const int azimuths = 2 * nodes;
  std::vector<int> charts;
  if (chart < 0) charts = {0, 1};
  else charts = {chart};
  const double chart_weight = 1.0 / static_cast<double>(charts.size());
  for (int c : charts) {
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double z = c == 0 ? rule.nodes[i] : -rule.nodes[i];
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int k = 0; k < azimuths; ++k) {
        const double phi = 2.0 * kPi * (k + 0.5) / azimuths;
        Point x{rho * std::cos(phi), rho * std::sin(phi), z};
        const double n = std::sqrt(dot3(x, x));
        for (double& v : x) v /= n;
        out.push_back({make_base_point(spec, x), chart_weight * rule.weights[i] / azimuths});
      }
    }
  }
  return out;
}

}  // namespace berrylab
