#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "berrylab/field_source.hpp"
#include "berrylab/manifolds.hpp"

namespace berrylab {

enum class GridLayout { Ball, Points };

/// Nodes of a square lattice (resolution points per axis over [-R, R]) kept
/// inside the closed ball, or an explicit probe list.
struct GridSpec {
  int dimension = 2;
  double radius = 1.0;
  int resolution = 33;
  int order = 2;
  GridLayout layout = GridLayout::Ball;
  std::vector<Point> points;
};

inline constexpr int kMinGridResolution = 8;

/// Throws DomainError when the spec is malformed; `max_order` caps `order`.
void validate_grid(const GridSpec& grid, int max_order = kMaxUserDerivativeOrder);
double grid_spacing(const GridSpec& grid);

/// A field sampled with all partial derivatives |alpha| <= order at the grid nodes.
class LocalizedField {
 public:
  LocalizedField(GridSpec grid, std::vector<Point> nodes, std::vector<std::array<int, kMaxDimension>> lattice,
                 std::vector<double> data, std::string provenance);

  const GridSpec& grid() const noexcept { return grid_; }
  int dimension() const noexcept { return grid_.dimension; }
  int order() const noexcept { return grid_.order; }
  const MultiIndexTable& table() const { return MultiIndexTable::get(grid_.dimension, grid_.order); }
  std::size_t stride() const { return table().size(); }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const Point& node(std::size_t i) const { return nodes_[i]; }
  double node_radius(std::size_t i) const { return radii_[i]; }
  /// Integer lattice coordinates of a Ball-layout node.
  const std::array<int, kMaxDimension>& lattice(std::size_t i) const { return lattice_[i]; }
  double derivative(std::size_t node, std::size_t entry) const { return data_[node * stride() + entry]; }
  double value(std::size_t node) const { return data_[node * stride()]; }
  std::span<const double> data() const noexcept { return data_; }
  const std::string& provenance() const noexcept { return provenance_; }

  /// Same nodes and derivative layout.
  bool compatible(const LocalizedField& other) const;

 private:
  GridSpec grid_;
  std::vector<Point> nodes_;
  std::vector<std::array<int, kMaxDimension>> lattice_;
  std::vector<double> radii_;
  std::vector<double> data_;
  std::string provenance_;
};

/// Evaluates the source (value and derivatives) on the grid.
LocalizedField sample(const FieldSource& source, const GridSpec& grid, int max_order = kMaxUserDerivativeOrder);

/// phi(y) = psi(Exp_p(y / sqrt(lambda))).
class LocalizedEigenfunction final : public FieldSource {
 public:
  LocalizedEigenfunction(std::shared_ptr<const Eigenfunction> psi, BasePoint p);

  int dimension() const override { return psi_->manifold().dimension(); }
  double domain_radius() const override;
  Jet evaluate(std::span<const double> point, int order) const override;
  double value(std::span<const double> point) const override;
  std::string provenance() const override;

  const Eigenfunction& eigenfunction() const noexcept { return *psi_; }
  const BasePoint& base_point() const noexcept { return base_; }

 private:
  std::shared_ptr<const Eigenfunction> psi_;
  BasePoint base_;
  double scale_;
  std::shared_ptr<const CosineSum> flat_;
};

/// Throws PreconditionError on the sphere when R / sqrt(lambda) >= pi.
void check_localization_domain(const Eigenfunction& psi, double radius);

LocalizedField localize(const Eigenfunction& psi, const BasePoint& p, const GridSpec& grid);

/// max over |alpha| <= r of the grid sup of |d^alpha f| over |y| <= rho.
double cr_norm(const LocalizedField& f, int r, double rho);
/// C^r distance of two fields on the same grid.
double cr_distance(const LocalizedField& f, const LocalizedField& g, int r, double rho);

struct FrechetParams {
  int kmax = 8;
  int nmax = 6;
  /// Lattice spacing of the sampling grid over the radius (nmax - 1) ball.
  double spacing = 1.0 / 16.0;
};

/// 2^{-kmax+2} + 2^{-nmax+2}: bound on the omitted part of the series.
double frechet_tail_bound(const FrechetParams& params);

/// Sampling grid for the metric: ball of radius nmax - 1 containing the
/// origin, derivatives up to kmax - 1.
GridSpec frechet_grid(int dimension, const FrechetParams& params);

struct FrechetResult {
  double distance = 0.0;
  double tail_bound = 0.0;
};

/// Truncated sum_{n < N} sum_{k < K} 2^{-k-n} s_kn / (1 + s_kn) with
/// s_kn = max_{|alpha| = k} sup_{|y| <= n} |d^alpha (f - g)|; n = 0 is the
/// value at the origin.
FrechetResult frechet_distance(const LocalizedField& f, const LocalizedField& g, const FrechetParams& params);
FrechetResult frechet_distance(const FieldSource& f, const FieldSource& g, const FrechetParams& params);

/// tau_y f on the grid, by re-evaluation at shifted nodes.
LocalizedField translate(const SourcePtr& source, std::span<const double> shift, const GridSpec& grid);

/// Grid sup of |Delta f + f|.
double helmholtz_residual(const LocalizedField& f);

/// Self-describing text export: '#' header lines then CSV rows.
std::string to_text(const LocalizedField& f);
LocalizedField from_text(const std::string& text);

}  // namespace berrylab
