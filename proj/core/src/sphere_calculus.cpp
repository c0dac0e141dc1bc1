#include "cmk/sphere_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cmk {

namespace {

// Derivative matrices annihilate constants only up to roundoff in their row
// sums; differentiating h - h[0] makes constant fields differentiate to 0.
Eigen::VectorXd shifted(const Eigen::VectorXd& v) { return v.array() - v[0]; }

}  // namespace

std::array<double, 2> sym2_eigenvalues(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double half_diff = 0.5 * (a - c);
  const double r = std::hypot(half_diff, b);
  return {mean - r, mean + r};
}

double HessianField::min_eigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& nh : nodes) m = std::min(m, nh.eig[0]);
  return m;
}

double HessianField::max_eigenvalue() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& nh : nodes) m = std::max(m, dim == 1 ? nh.eig[0] : nh.eig[1]);
  return m;
}

std::vector<double> HessianField::eigenvalues(std::size_t node) const {
  const auto& e = nodes[node].eig;
  if (dim == 1) return {e[0]};
  return {e[0], e[1]};
}

GradientField grad(const GridFunction& h) {
  const SphereGrid& g = h.grid();
  const auto& ops = g.ops();
  GradientField out;
  out.dim = g.dim();
  out.components.resize(g.size());
  if (g.dim() == 1) {
    const Eigen::VectorXd d = ops.d_theta * shifted(h.values());
    for (std::size_t i = 0; i < g.size(); ++i) out.components[i] = {d[static_cast<Eigen::Index>(i)], 0.0};
    return out;
  }
  const Eigen::VectorXd s = shifted(h.values());
  const Eigen::VectorXd dlat = ops.d_lat * s;
  const Eigen::VectorXd dlon = ops.d_lon * s;
  const auto& sec = g.sec_lat();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    out.components[i] = {dlat[e], sec[e] * dlon[e]};
  }
  return out;
}

HessianField hessian_field(const GridFunction& h) {
  const SphereGrid& g = h.grid();
  const auto& ops = g.ops();
  const Eigen::VectorXd& v = h.values();
  const Eigen::VectorXd s = shifted(v);
  HessianField out;
  out.dim = g.dim();
  out.nodes.resize(g.size());
  if (g.dim() == 1) {
    const Eigen::VectorXd d1 = ops.d_theta * s;
    const Eigen::VectorXd d2 = ops.d_theta2 * s;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto e = static_cast<Eigen::Index>(i);
      NodeHessian& nh = out.nodes[i];
      nh.b11 = d2[e] + v[e];
      nh.eig = {nh.b11, 0.0};
      nh.grad = {d1[e], 0.0};
    }
    return out;
  }
  const Eigen::VectorXd h_lat = ops.d_lat * s;
  const Eigen::VectorXd h_lon = ops.d_lon * s;
  const Eigen::VectorXd h_latlat = ops.d_lat2 * s;
  const Eigen::VectorXd h_lonlon = ops.d_lon2 * s;
  const Eigen::VectorXd h_latlon = ops.d_latlon * s;
  const auto& sec = g.sec_lat();
  const auto& tan = g.tan_lat();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    NodeHessian& nh = out.nodes[i];
    nh.b11 = h_latlat[e] + v[e];
    nh.b12 = sec[e] * (h_latlon[e] + tan[e] * h_lon[e]);
    nh.b22 = sec[e] * sec[e] * h_lonlon[e] - tan[e] * h_lat[e] + v[e];
    nh.eig = sym2_eigenvalues(nh.b11, nh.b12, nh.b22);
    nh.grad = {h_lat[e], sec[e] * h_lon[e]};
  }
  return out;
}

GridFunction laplace_beltrami(const GridFunction& h) {
  const HessianField hf = hessian_field(h);
  const int n = h.grid().dim();
  Eigen::VectorXd out(h.values().size());
  for (std::size_t i = 0; i < hf.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = hf.nodes[i].trace(n) - n * h[i];
  }
  return h.with_values(std::move(out));
}

}  // namespace cmk
