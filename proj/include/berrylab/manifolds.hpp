#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "berrylab/field_source.hpp"
#include "berrylab/jet.hpp"
#include "berrylab/rng.hpp"

namespace berrylab {

enum class ManifoldKind { Torus, Sphere };

/// Flat torus prod [0, a_i) or the round unit sphere S^2.
struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::Torus;
  std::vector<double> sides;
  /// Declared by the caller for experiments on irrational tori; never detected.
  bool irrational = false;

  static ManifoldSpec torus(std::vector<double> sides, bool irrational = false);
  static ManifoldSpec sphere();

  int dimension() const;
  /// Dimension of the ambient coordinates used for points (torus d, sphere 3).
  int ambient_dimension() const;
  double volume() const;
  std::string describe() const;
};

using LatticeVector = std::array<long long, kMaxDimension>;

/// One eigenspace. On tori `modes` holds one representative xi of each +-xi
/// pair (first nonzero entry positive); the real basis is
/// sqrt2 cos(2 pi xi . x / a), sqrt2 sin(2 pi xi . x / a) per representative.
/// On the sphere `degree` is l and the basis is sqrt(4 pi) Y_lm.
struct EigenvalueEntry {
  double lambda = 0.0;
  int multiplicity = 0;
  std::vector<LatticeVector> modes;
  int degree = -1;
};

inline constexpr std::size_t kEnumerationCap = 1'000'000;

/// Every eigenvalue 0 < lambda <= lambda_max, sorted; multiplicities exact.
std::vector<EigenvalueEntry> eigenvalues_up_to(const ManifoldSpec& spec, double lambda_max);

/// The eigenspace of lambda (searched on the lattice shell directly, so
/// very large eigenvalues are cheap). Throws if lambda is not an eigenvalue.
EigenvalueEntry eigenspace(const ManifoldSpec& spec, double lambda);

/// Sphere eigenspace of degree l >= 1.
EigenvalueEntry sphere_degree(int degree);

struct Chart {
  int id = 0;
  std::string name;
};

std::vector<Chart> chart_cover(const ManifoldSpec& spec);

/// Chart containing the point, or -1 on a chart boundary (the sphere equator).
int chart_of(const ManifoldSpec& spec, std::span<const double> point);

/// Base point with the chart's orthonormal frame, in ambient coordinates.
struct BasePoint {
  Point position{};
  int chart = 0;
  std::array<Point, kMaxDimension> frame{};
};

BasePoint make_base_point(const ManifoldSpec& spec, std::span<const double> position);

/// Uniform base point; chart < 0 means any chart.
BasePoint random_base_point(const ManifoldSpec& spec, int chart, Engine& engine);
BasePoint random_base_point(const ManifoldSpec& spec, int chart, std::uint64_t seed);

/// Exp_p(sum v_j V_j): flat translation mod the lattice on tori, the great
/// circle formula on the sphere (|v| < pi).
Point exp_map(const ManifoldSpec& spec, const BasePoint& p, std::span<const double> v);

/// Geodesic distance between two manifold points.
double geodesic_distance(const ManifoldSpec& spec, std::span<const double> a, std::span<const double> b);

class Eigenfunction {
 public:
  /// Normalized so that ||psi||^2 = Vol(M). A zero vector is rejected.
  static Eigenfunction make(const ManifoldSpec& spec, const EigenvalueEntry& entry,
                            std::vector<double> coefficients);
  /// Coefficients used as given, no normalization.
  static Eigenfunction raw(const ManifoldSpec& spec, const EigenvalueEntry& entry,
                           std::vector<double> coefficients);

  const ManifoldSpec& manifold() const noexcept { return spec_; }
  const EigenvalueEntry& entry() const noexcept { return entry_; }
  double lambda() const noexcept { return entry_.lambda; }
  std::span<const double> coefficients() const noexcept { return coefficients_; }
  std::string id() const;

  /// psi at a manifold point (torus coordinates or a unit 3-vector).
  double value(std::span<const double> point) const;

  /// Taylor jet in y of psi(Exp_p(scale * y)) about y.
  Jet pullback(const BasePoint& p, std::span<const double> y, int order, double scale) const;

  /// On tori the pullback is a cosine sum; terms for psi(Exp_p(scale * y)).
  std::vector<CosineTerm> torus_terms(const BasePoint& p, double scale) const;

  /// |Delta psi + lambda psi| at p from second derivatives in normal coordinates.
  double eigen_residual(const BasePoint& p) const;

 private:
  Eigenfunction(ManifoldSpec spec, EigenvalueEntry entry, std::vector<double> coefficients);

  ManifoldSpec spec_;
  EigenvalueEntry entry_;
  std::vector<double> coefficients_;
};

/// Jets (on the sphere, ambient R^3) of Exp_p(scale * y) about y.
std::vector<Jet> sphere_exp_jets(const BasePoint& p, std::span<const double> y, int order, double scale);

/// Quadrature base points with weights summing to 1 over the chart (or the
/// whole manifold if chart < 0). Torus: midpoint product grid with `nodes`
/// per axis; sphere: Gauss-Legendre in z times uniform azimuth.
struct WeightedBasePoint {
  BasePoint point;
  double weight = 0.0;
};
std::vector<WeightedBasePoint> quadrature_base_points(const ManifoldSpec& spec, int chart, int nodes);

}  // namespace berrylab
