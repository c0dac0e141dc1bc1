#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace cmk {

using Vec3 = std::array<double, 3>;
using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// How latitude derivatives are taken on S^2. Longitude is always spectral.
///
/// kSecondOrder: three-point stencils on the Gauss latitudes, continued
/// through each pole onto the antipodal meridian.
/// kSpectral: trigonometric interpolation on the full great circle formed by
/// a meridian and its antipodal meridian.
enum class LatitudeScheme { kSecondOrder, kSpectral };

struct GridResolution {
  int n = 2;
  int m_theta = 64;  // S^1 only
  int m_lat = 16;    // S^2 only
  int m_lon = 32;    // S^2 only
  LatitudeScheme scheme = LatitudeScheme::kSecondOrder;
};

/// Coordinate derivative matrices, built once per grid.
///
/// S^1 uses d_theta / d_theta2. S^2 uses the lat/lon family, where d_latlon is
/// the product d_lat * d_lon (the two commute on this grid).
struct SphereOperators {
  SparseRowMatrix d_theta;
  SparseRowMatrix d_theta2;
  SparseRowMatrix d_lat;
  SparseRowMatrix d_lat2;
  SparseRowMatrix d_lon;
  SparseRowMatrix d_lon2;
  SparseRowMatrix d_latlon;
};

/// Structured grid on S^1 (equispaced angles) or S^2 (Gauss-Legendre
/// latitudes times uniform longitudes). Node order on S^2 is latitude-major:
/// index = j * m_lon + l with j running south to north.
class SphereGrid {
 public:
  int dim() const { return res_.n; }
  std::size_t size() const { return coords_.size(); }
  const GridResolution& resolution() const { return res_; }

  const std::vector<Vec3>& coords() const { return coords_; }
  const Vec3& coord(std::size_t node) const { return coords_[node]; }
  const std::vector<double>& weights() const { return weights_; }

  /// Tangent frame at a node as vectors in R^{n+1}: axis 0 is d/dtheta (S^1)
  /// or d/dlat (S^2); axis 1 is (1/cos lat) d/dlon.
  Vec3 frame(std::size_t node, int axis) const;

  // S^1 accessors
  double theta(std::size_t node) const { return angle_[node]; }

  // S^2 accessors
  double lat_of_row(int j) const { return lat_[static_cast<std::size_t>(j)]; }
  double lon_of_col(int l) const;
  int row(std::size_t node) const { return static_cast<int>(node / static_cast<std::size_t>(res_.m_lon)); }
  int col(std::size_t node) const { return static_cast<int>(node % static_cast<std::size_t>(res_.m_lon)); }
  std::size_t index(int j, int l) const;
  double lat(std::size_t node) const { return lat_[static_cast<std::size_t>(row(node))]; }
  double lon(std::size_t node) const { return lon_of_col(col(node)); }
  /// Per-node sec(lat) and tan(lat); empty on S^1.
  const Eigen::VectorXd& sec_lat() const { return sec_; }
  const Eigen::VectorXd& tan_lat() const { return tan_; }

  /// Node index of -x.
  std::size_t antipode(std::size_t node) const { return antipode_[node]; }
  const std::vector<std::size_t>& antipodes() const { return antipode_; }

  /// Characteristic node spacing in radians (max of the directional spacings).
  double spacing() const;

  const SphereOperators& ops() const { return ops_; }

  /// Surface measure of the sphere: 2 pi for S^1, 4 pi for S^2.
  double measure() const;

 private:
  friend std::shared_ptr<const SphereGrid> build_grid(const GridResolution&);
  SphereGrid() = default;

  GridResolution res_;
  std::vector<Vec3> coords_;
  std::vector<double> weights_;
  std::vector<double> angle_;  // S^1 angles
  std::vector<double> lat_;    // S^2 rows
  std::vector<double> cos_lon_, sin_lon_;
  Eigen::VectorXd sec_, tan_;
  std::vector<std::size_t> antipode_;
  SphereOperators ops_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

/// Builds a grid and its derivative operators. Throws PreconditionError on
/// n not in {1, 2}, counts below 8, or odd longitude / angle counts.
GridPtr build_grid(const GridResolution& res);

/// Samples of a scalar field, one finite value per grid node.
class GridFunction {
 public:
  GridFunction(GridPtr grid, Eigen::VectorXd values);

  static GridFunction constant(GridPtr grid, double c);
  static GridFunction sample(GridPtr grid, const std::function<double(const Vec3&)>& fn);

  const SphereGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

  double min() const { return values_.minCoeff(); }
  double max() const { return values_.maxCoeff(); }

  /// Same grid, new samples.
  GridFunction with_values(Eigen::VectorXd values) const { return {grid_, std::move(values)}; }

 private:
  GridPtr grid_;
  Eigen::VectorXd values_;
};

/// Grid-compatible isometries: each maps the node set onto itself.
struct GridSymmetry {
  enum class Kind { kAntipodal, kLongitudeShift, kLatitudeFlip };
  Kind kind = Kind::kAntipodal;
  int steps = 0;  // for kLongitudeShift (rotation by steps * 2pi/m on S^1)

  static GridSymmetry antipodal() { return {Kind::kAntipodal, 0}; }
  static GridSymmetry longitude_shift(int steps) { return {Kind::kLongitudeShift, steps}; }
  static GridSymmetry latitude_flip() { return {Kind::kLatitudeFlip, 0}; }
};

/// Node permutation of s: returns perm with (h o s)[i] = h[perm[i]].
std::vector<std::size_t> symmetry_permutation(const SphereGrid& grid, const GridSymmetry& s);

/// (h o s) sampled on the same grid.
GridFunction apply_symmetry(const GridFunction& h, const GridSymmetry& s);

/// Averages each antipodal pair; the result satisfies h(x) == h(-x) bitwise.
GridFunction even_project(const GridFunction& h);

/// max |h(x) - h(-x)| over nodes.
double antipodal_defect(const GridFunction& h);

/// Quadrature sum of weights * values in node order.
double integrate(const GridFunction& g);

/// Quadrature-weighted L2 norm.
double l2_norm(const GridFunction& g);

}  // namespace cmk
