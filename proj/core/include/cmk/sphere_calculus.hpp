#pragma once

#include <array>
#include <vector>

#include "cmk/sphere_grid.hpp"

namespace cmk {

/// Frame components of the spherical gradient, one n-vector per node
/// (second component unused on S^1).
struct GradientField {
  int dim = 0;
  std::vector<std::array<double, 2>> components;

  double norm_squared(std::size_t node) const {
    const auto& g = components[node];
    return dim == 1 ? g[0] * g[0] : g[0] * g[0] + g[1] * g[1];
  }
};

/// b = grad^2 h + h I at one node, in the local orthonormal frame.
struct NodeHessian {
  double b11 = 0.0;
  double b12 = 0.0;
  double b22 = 0.0;
  std::array<double, 2> eig{};   // ascending; eig[1] unused on S^1
  std::array<double, 2> grad{};  // frame gradient h_i

  double trace(int dim) const { return dim == 1 ? b11 : b11 + b22; }
};

/// Per-node spherical Hessian b_ij = h_ij + h delta_ij with eigenvalues
/// (the principal radii of curvature) and the frame gradient.
struct HessianField {
  int dim = 0;
  std::vector<NodeHessian> nodes;

  double min_eigenvalue() const;
  double max_eigenvalue() const;
  std::size_t size() const { return nodes.size(); }
  /// Eigenvalues at a node as a vector of length dim.
  std::vector<double> eigenvalues(std::size_t node) const;
};

GradientField grad(const GridFunction& h);

/// On S^2 with frame e1 = d/dlat, e2 = sec(lat) d/dlon:
///   b11 = h_lat,lat + h
///   b12 = sec(lat) (h_lat,lon + tan(lat) h_lon)
///   b22 = sec^2(lat) h_lon,lon - tan(lat) h_lat + h
/// the tan terms being the Christoffel corrections of the round metric.
HessianField hessian_field(const GridFunction& h);

/// Delta h = trace(b) - n h.
GridFunction laplace_beltrami(const GridFunction& h);

/// Closed-form eigenvalues of a symmetric 2x2 matrix, ascending.
std::array<double, 2> sym2_eigenvalues(double a, double b, double c);

}  // namespace cmk
