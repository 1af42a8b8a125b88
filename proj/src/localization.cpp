#include "berrylab/localization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "berrylab/errors.hpp"

namespace berrylab {

namespace {

constexpr double kPi = std::numbers::pi;

double norm(const Point& p, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
  return std::sqrt(s);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void validate_grid(const GridSpec& grid, int max_order) {
  if (grid.dimension != 2 && grid.dimension != 3) throw DomainError("grid dimension must be 2 or 3");
  if (grid.order < 0 || grid.order > max_order) {
    throw DomainError("grid derivative order must be in 0.." + std::to_string(max_order));
  }
  if (grid.layout == GridLayout::Points) {
    if (grid.points.empty()) throw DomainError("point grid needs at least one point");
    return;
  }
  if (!(grid.radius > 0.0) || !std::isfinite(grid.radius)) throw DomainError("grid radius must be positive");
  if (grid.resolution < kMinGridResolution) throw DomainError("grid resolution must be at least 8");
}

double grid_spacing(const GridSpec& grid) { return 2.0 * grid.radius / (grid.resolution - 1); }

LocalizedField::LocalizedField(GridSpec grid, std::vector<Point> nodes,
                               std::vector<std::array<int, kMaxDimension>> lattice, std::vector<double> data,
                               std::string provenance)
    : grid_(std::move(grid)), nodes_(std::move(nodes)), lattice_(std::move(lattice)), data_(std::move(data)),
      provenance_(std::move(provenance)) {
  if (data_.size() != nodes_.size() * stride()) throw DomainError("field data does not match the grid");
  if (!lattice_.empty() && lattice_.size() != nodes_.size()) throw DomainError("lattice indices do not match nodes");
  for (double v : data_) {
    if (!std::isfinite(v)) throw NumericalError("non-finite value in sampled field");
  }
  radii_.reserve(nodes_.size());
  for (const Point& p : nodes_) radii_.push_back(norm(p, grid_.dimension));
}

bool LocalizedField::compatible(const LocalizedField& other) const {
  return grid_.dimension == other.grid_.dimension && grid_.order == other.grid_.order &&
         nodes_ == other.nodes_;
}

LocalizedField sample(const FieldSource& source, const GridSpec& grid, int max_order) {
  validate_grid(grid, max_order);
  if (source.dimension() != grid.dimension) throw DomainError("field and grid dimensions differ");
  std::vector<Point> nodes;
  std::vector<std::array<int, kMaxDimension>> lattice;
  const int d = grid.dimension;
  if (grid.layout == GridLayout::Points) {
    nodes = grid.points;
  } else {
    const double h = grid_spacing(grid);
    const double centre = (grid.resolution - 1) / 2.0;
    const double limit = grid.radius * grid.radius * (1.0 + 1e-12);
    const int n = grid.resolution;
    const int nz = d == 3 ? n : 1;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < nz; ++k) {
          Point p{(i - centre) * h, (j - centre) * h, d == 3 ? (k - centre) * h : 0.0};
          if (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] > limit) continue;
          nodes.push_back(p);
          lattice.push_back({i, j, k});
        }
      }
    }
  }
  const MultiIndexTable& table = MultiIndexTable::get(d, grid.order);
  std::vector<double> data;
  data.reserve(nodes.size() * table.size());
  for (const Point& p : nodes) {
    const std::span<const double> q(p.data(), static_cast<std::size_t>(d));
    check_in_domain(source, q);
    const Jet j = source.evaluate(q, grid.order);
    for (std::size_t k = 0; k < table.size(); ++k) data.push_back(j.derivative(k));
  }
  return LocalizedField(grid, std::move(nodes), std::move(lattice), std::move(data), source.provenance());
}

LocalizedEigenfunction::LocalizedEigenfunction(std::shared_ptr<const Eigenfunction> psi, BasePoint p)
    : psi_(std::move(psi)), base_(p) {
  if (!psi_) throw DomainError("localization needs an eigenfunction");
  scale_ = 1.0 / std::sqrt(psi_->lambda());
  if (psi_->manifold().kind == ManifoldKind::Torus) {
    flat_ = std::make_shared<CosineSum>(psi_->manifold().dimension(), psi_->torus_terms(base_, scale_), "");
  }
}

double LocalizedEigenfunction::domain_radius() const {
  if (flat_) return std::numeric_limits<double>::infinity();
  // Open injectivity ball, shrunk by one ulp-scale margin.
  return kPi * std::sqrt(psi_->lambda()) * (1.0 - 1e-12);
}

Jet LocalizedEigenfunction::evaluate(std::span<const double> point, int order) const {
  if (flat_) return flat_->evaluate(point, order);
  return psi_->pullback(base_, point, order, scale_);
}

double LocalizedEigenfunction::value(std::span<const double> point) const {
  if (flat_) return flat_->value(point);
  return psi_->pullback(base_, point, 0, scale_).value();
}

std::string LocalizedEigenfunction::provenance() const {
  std::ostringstream os;
  os.precision(17);
  os << psi_->id() << ":base=(";
  const int n = psi_->manifold().ambient_dimension();
  for (int i = 0; i < n; ++i) os << (i ? "," : "") << base_.position[static_cast<std::size_t>(i)];
  os << ")";
  return os.str();
}

void check_localization_domain(const Eigenfunction& psi, double radius) {
  if (psi.manifold().kind != ManifoldKind::Sphere) return;
  if (!(radius / std::sqrt(psi.lambda()) < kPi)) {
    throw PreconditionError("sphere localization needs R / sqrt(lambda) < pi (lambda = " +
                            format_double(psi.lambda()) + ", R = " + format_double(radius) + ")");
  }
}

LocalizedField localize(const Eigenfunction& psi, const BasePoint& p, const GridSpec& grid) {
  validate_grid(grid);
  if (grid.dimension != psi.manifold().dimension()) throw DomainError("grid and manifold dimensions differ");
  double extent = grid.radius;
  if (grid.layout == GridLayout::Points) {
    extent = 0.0;
    for (const Point& q : grid.points) extent = std::max(extent, norm(q, grid.dimension));
  }
  check_localization_domain(psi, extent);
  const LocalizedEigenfunction phi(std::make_shared<Eigenfunction>(psi), p);
  return sample(phi, grid);
}

double cr_norm(const LocalizedField& f, int r, double rho) {
  if (r < 0 || r > f.order()) throw PreconditionError("C^r norm needs derivatives up to order r");
  if (rho < 0.0 || (f.grid().layout == GridLayout::Ball && rho > f.grid().radius * (1.0 + 1e-12))) {
    throw DomainError("C^r radius outside the grid");
  }
  const std::size_t entries = f.table().count_up_to(r);
  const double limit = rho * (1.0 + 1e-12);
  double sup = 0.0;
  for (std::size_t i = 0; i < f.node_count(); ++i) {
    if (f.node_radius(i) > limit) continue;
    for (std::size_t k = 0; k < entries; ++k) sup = std::max(sup, std::fabs(f.derivative(i, k)));
  }
  return sup;
}

double cr_distance(const LocalizedField& f, const LocalizedField& g, int r, double rho) {
  if (!f.compatible(g)) throw DomainError("incompatible grids");
  if (r < 0 || r > f.order()) throw PreconditionError("C^r distance needs derivatives up to order r");
  const std::size_t entries = f.table().count_up_to(r);
  const double limit = rho * (1.0 + 1e-12);
  double sup = 0.0;
  for (std::size_t i = 0; i < f.node_count(); ++i) {
    if (f.node_radius(i) > limit) continue;
    for (std::size_t k = 0; k < entries; ++k) sup = std::max(sup, std::fabs(f.derivative(i, k) - g.derivative(i, k)));
  }
  return sup;
}

double frechet_tail_bound(const FrechetParams& params) {
  return std::ldexp(1.0, -params.kmax + 2) + std::ldexp(1.0, -params.nmax + 2);
}

GridSpec frechet_grid(int dimension, const FrechetParams& params) {
  if (params.kmax < 1 || params.nmax < 1) throw DomainError("Frechet truncation needs K_max, N_max >= 1");
  if (params.kmax - 1 > kMaxJetOrder) throw DomainError("Frechet K_max is capped at 9");
  if (!(params.spacing > 0.0)) throw DomainError("Frechet grid spacing must be positive");
  GridSpec g;
  g.dimension = dimension;
  g.order = params.kmax - 1;
  const int radius = std::max(1, params.nmax - 1);
  g.radius = radius;
  int half = static_cast<int>(std::ceil(radius / params.spacing));
  half = std::max(half, kMinGridResolution / 2);
  g.resolution = 2 * half + 1;
  return g;
}

FrechetResult frechet_distance(const LocalizedField& f, const LocalizedField& g, const FrechetParams& params) {
  if (params.kmax < 1 || params.nmax < 1) throw DomainError("Frechet truncation needs K_max, N_max >= 1");
  if (!f.compatible(g)) throw DomainError("incompatible grids");
  if (f.order() < params.kmax - 1) throw DomainError("incompatible grids: derivatives up to K_max - 1 required");
  const GridSpec& grid = f.grid();
  if (grid.layout != GridLayout::Ball || grid.radius < params.nmax - 1 - 1e-12) {
    throw DomainError("incompatible grids: a ball of radius N_max - 1 is required");
  }
  const MultiIndexTable& table = f.table();
  const auto kmax = static_cast<std::size_t>(params.kmax);
  const auto nmax = static_cast<std::size_t>(params.nmax);
  // s[n][k]
  std::vector<double> s(kmax * nmax, 0.0);
  bool has_origin = false;
  for (std::size_t i = 0; i < f.node_count(); ++i) {
    const double r = f.node_radius(i);
    if (r == 0.0) has_origin = true;
    // Smallest n whose ball holds the node; n = 0 only for the origin.
    std::size_t first = r == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(r * (1.0 - 1e-12)));
    if (first == 0 && r > 0.0) first = 1;
    if (first >= nmax) continue;
    for (std::size_t e = 0; e < table.count_up_to(params.kmax - 1); ++e) {
      const auto k = static_cast<std::size_t>(table.degree(e));
      const double diff = std::fabs(f.derivative(i, e) - g.derivative(i, e));
      for (std::size_t n = first; n < nmax; ++n) s[n * kmax + k] = std::max(s[n * kmax + k], diff);
    }
  }
  if (!has_origin) throw DomainError("incompatible grids: the origin must be a grid node");
  double total = 0.0;
  for (std::size_t n = 0; n < nmax; ++n) {
    for (std::size_t k = 0; k < kmax; ++k) {
      const double v = s[n * kmax + k];
      total += std::ldexp(v / (1.0 + v), -static_cast<int>(k + n));
    }
  }
  return {total, frechet_tail_bound(params)};
}

FrechetResult frechet_distance(const FieldSource& f, const FieldSource& g, const FrechetParams& params) {
  if (f.dimension() != g.dimension()) throw DomainError("incompatible grids: dimensions differ");
  const GridSpec grid = frechet_grid(f.dimension(), params);
  return frechet_distance(sample(f, grid, kMaxJetOrder), sample(g, grid, kMaxJetOrder), params);
}

LocalizedField translate(const SourcePtr& source, std::span<const double> shift, const GridSpec& grid) {
  if (!source) throw DomainError("translate needs a source");
  const ShiftedField shifted(source, shift);
  return sample(shifted, grid);
}

double helmholtz_residual(const LocalizedField& f) {
  if (f.order() < 2) throw PreconditionError("Helmholtz residual needs second derivatives");
  const MultiIndexTable& table = f.table();
  std::vector<std::size_t> pure;
  for (int i = 0; i < f.dimension(); ++i) {
    MultiIndex alpha{0, 0, 0};
    alpha[static_cast<std::size_t>(i)] = 2;
    pure.push_back(table.position(alpha));
  }
  double sup = 0.0;
  for (std::size_t n = 0; n < f.node_count(); ++n) {
    double lap = f.value(n);
    for (std::size_t k : pure) lap += f.derivative(n, k);
    sup = std::max(sup, std::fabs(lap));
  }
  return sup;
}

std::string to_text(const LocalizedField& f) {
  const GridSpec& g = f.grid();
  std::ostringstream os;
  os.precision(17);
  os << "# berrylab-localized-field 1\n";
  os << "# dimension=" << g.dimension << "\n";
  os << "# radius=" << g.radius << "\n";
  os << "# resolution=" << g.resolution << "\n";
  os << "# order=" << g.order << "\n";
  os << "# layout=" << (g.layout == GridLayout::Ball ? "ball" : "points") << "\n";
  os << "# provenance=" << f.provenance() << "\n";
  const MultiIndexTable& table = f.table();
  static const char* axes[] = {"y1", "y2", "y3"};
  for (int i = 0; i < g.dimension; ++i) os << (i ? "," : "") << axes[i];
  if (g.layout == GridLayout::Ball) {
    for (int i = 0; i < g.dimension; ++i) os << ",i" << (i + 1);
  }
  for (std::size_t k = 0; k < table.size(); ++k) os << "," << table.label(k);
  os << "\n";
  for (std::size_t n = 0; n < f.node_count(); ++n) {
    for (int i = 0; i < g.dimension; ++i) os << (i ? "," : "") << f.node(n)[static_cast<std::size_t>(i)];
    if (g.layout == GridLayout::Ball) {
      for (int i = 0; i < g.dimension; ++i) os << "," << f.lattice(n)[static_cast<std::size_t>(i)];
    }
    for (std::size_t k = 0; k < table.size(); ++k) os << "," << f.derivative(n, k);
    os << "\n";
  }
  return os.str();
}

LocalizedField from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  GridSpec g;
  std::string provenance;
  bool magic = false;
  bool header_done = false;
  std::vector<Point> nodes;
  std::vector<std::array<int, kMaxDimension>> lattice;
  std::vector<double> data;
  std::size_t expected = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.substr(line.find_first_not_of("# "));
      if (body.rfind("berrylab-localized-field", 0) == 0) {
        magic = true;
        continue;
      }
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = body.substr(0, eq);
      const std::string value = body.substr(eq + 1);
      if (key == "dimension") g.dimension = std::stoi(value);
      else if (key == "radius") g.radius = std::stod(value);
      else if (key == "resolution") g.resolution = std::stoi(value);
      else if (key == "order") g.order = std::stoi(value);
      else if (key == "layout") g.layout = value == "ball" ? GridLayout::Ball : GridLayout::Points;
      else if (key == "provenance") provenance = value;
      continue;
    }
    if (!header_done) {
      if (!magic) throw IoError("not a localized-field file");
      header_done = true;
      expected = MultiIndexTable::get(g.dimension, g.order).size();
      continue;  // column names
    }
    std::vector<double> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
    const std::size_t d = static_cast<std::size_t>(g.dimension);
    const std::size_t lat = g.layout == GridLayout::Ball ? d : 0;
    if (cells.size() != d + lat + expected) throw IoError("malformed localized-field row");
    Point p{};
    for (std::size_t i = 0; i < d; ++i) p[i] = cells[i];
    nodes.push_back(p);
    if (lat) {
      std::array<int, kMaxDimension> ix{0, 0, 0};
      for (std::size_t i = 0; i < d; ++i) ix[i] = static_cast<int>(cells[d + i]);
      lattice.push_back(ix);
    }
    data.insert(data.end(), cells.begin() + static_cast<std::ptrdiff_t>(d + lat), cells.end());
  }
  if (!header_done) throw IoError("localized-field file has no body");
  if (g.layout == GridLayout::Points) g.points = nodes;
  return LocalizedField(g, std::move(nodes), std::move(lattice), std::move(data), provenance);
}

}  // namespace berrylab
