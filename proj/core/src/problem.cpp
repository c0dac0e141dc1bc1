#include "cmk/problem.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cmk/error.hpp"
#include "cmk/symfunc.hpp"

namespace cmk {

namespace {

void require_positive(const GridFunction& h) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0)) {
      std::ostringstream os;
      os << "h must be positive; h = " << h[i] << " at node " << i;
      throw DomainError(os.str(), i, h[i]);
    }
  }
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (a.grid_ptr() != b.grid_ptr()) throw PreconditionError("functions live on different grids");
}

// sigma^{11}, sigma^{12}, sigma^{22} with sigma^{12} the derivative in the
// symmetric off-diagonal entry counted once (d sigma_2 / d b12 = 2 sigma^{12}).
std::array<double, 3> node_sigma_grad(const NodeHessian& nh, int dim, int k) {
  if (dim == 1 || k == 1) return {1.0, 0.0, 1.0};
  return {nh.b22, -nh.b12, nh.b11};
}

ResidualReport make_report(const GridFunction& like, Eigen::VectorXd r) {
  GridFunction rf = like.with_values(std::move(r));
  const double linf = rf.values().cwiseAbs().maxCoeff();
  const double l2 = l2_norm(rf);
  return {std::move(rf), linf, l2};
}

}  // namespace

void ProblemSpec::validate() const {
  if (f.grid().dim() != n) throw PreconditionError("data grid dimension does not match n");
  if (k < 1 || k > n) throw PreconditionError("k must satisfy 1 <= k <= n");
  if (homotopy_exponent() <= 0.0) {
    throw UnsupportedParameterError("k + p - 1 must be positive (got " + std::to_string(homotopy_exponent()) + ")");
  }
  if (!(f.min() > 0.0)) throw PreconditionError("f must be positive");
  if (antipodal_defect(f) > 1e-12 * std::max(1.0, f.values().cwiseAbs().maxCoeff())) {
    throw PreconditionError("f must be even");
  }
  if (!(tol_newton > 0.0) || max_newton < 0) throw PreconditionError("invalid Newton controls");
  if (!(continuation.dt_min > 0.0) || continuation.dt0 < continuation.dt_min ||
      continuation.dt_max < continuation.dt0) {
    throw PreconditionError("continuation steps need 0 < dt_min <= dt0 <= dt_max");
  }
}

std::vector<std::string> ProblemSpec::warnings() const {
  std::vector<std::string> w;
  if (p == q) w.emplace_back("p == q: the constant-data radius (c / C(n,k))^{1/(q-p)} is undefined");
  if (!in_existence_range()) w.emplace_back("parameters outside 1 < p < q <= k + 1");
  if (k == n && n > 1) w.emplace_back("k == n: the dual Minkowski case");
  return w;
}

GridFunction homotopy_f(const ProblemSpec& spec, double t) {
  const double e = spec.homotopy_exponent();
  if (e <= 0.0) throw UnsupportedParameterError("homotopy requires k + p - 1 > 0");
  if (t < 0.0 || t > 1.0) throw PreconditionError("homotopy parameter must lie in [0, 1]");
  const double c = binom(spec.n, spec.k);
  if (t == 0.0) return GridFunction::constant(spec.grid(), c);
  if (t == 1.0) return spec.f;
  const double c_term = (1.0 - t) * std::pow(c, -1.0 / e);
  Eigen::VectorXd v(spec.f.values().size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = std::pow(c_term + t * std::pow(spec.f.values()[i], -1.0 / e), -e);
  }
  return spec.f.with_values(std::move(v));
}

double node_sigma(const NodeHessian& nh, int dim, int k) {
  if (k == 0) return 1.0;
  if (dim == 1) return nh.b11;
  if (k == 1) return nh.b11 + nh.b22;
  return nh.b11 * nh.b22 - nh.b12 * nh.b12;
}

AdmissibilityReport admissibility(const HessianField& hf, int k) {
  AdmissibilityReport rep;
  rep.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hf.size(); ++i) {
    const auto lam = hf.eigenvalues(i);
    const double m = in_gamma_k(lam, k).margin;
    if (m < rep.margin) {
      rep.margin = m;
      rep.worst_node = i;
    }
  }
  return rep;
}

ResidualReport residual_with_data(const ProblemSpec& spec, const GridFunction& h, const GridFunction& data) {
  require_same_grid(h, data);
  require_positive(h);
  const HessianField hf = hessian_field(h);
  const int dim = h.grid().dim();
  const double a = spec.k + 1.0 - spec.q;
  Eigen::VectorXd r(h.values().size());
  for (std::size_t i = 0; i < hf.size(); ++i) {
    const NodeHessian& nh = hf.nodes[i];
    const double hv = h[i];
    const double g2 = dim == 1 ? nh.grad[0] * nh.grad[0] : nh.grad[0] * nh.grad[0] + nh.grad[1] * nh.grad[1];
    const double rho2 = hv * hv + g2;
    const double rhs = data[i] * std::pow(hv, spec.p - 1.0) * std::pow(rho2, 0.5 * a);
    r[static_cast<Eigen::Index>(i)] = node_sigma(nh, dim, spec.k) - rhs;
  }
  return make_report(h, std::move(r));
}

ResidualReport residual(const ProblemSpec& spec, const GridFunction& h, double t) {
  require_same_grid(h, spec.f);
  return residual_with_data(spec, h, homotopy_f(spec, t));
}

SparseRowMatrix assemble_jacobian_sparse(const ProblemSpec& spec, const GridFunction& h, double t) {
  require_same_grid(h, spec.f);
  require_positive(h);
  const SphereGrid& g = h.grid();
  const int dim = g.dim();
  const HessianField hf = hessian_field(h);
  const AdmissibilityReport adm = admissibility(hf, spec.k);
  if (!adm.admissible()) {
    std::ostringstream os;
    os << "b(h) leaves Gamma_" << spec.k << " at node " << adm.worst_node << " (margin " << adm.margin << ")";
    throw AdmissibilityError(os.str(), adm.worst_node, adm.margin);
  }
  const GridFunction ft = homotopy_f(spec, t);
  const double a = spec.k + 1.0 - spec.q;
  const double p = spec.p;
  const auto n = static_cast<Eigen::Index>(g.size());

  Eigen::VectorXd c0(n), c_first1(n), c_first2(n);
  Eigen::VectorXd s11(n), s12(n), s22(n);
  for (Eigen::Index e = 0; e < n; ++e) {
    const auto i = static_cast<std::size_t>(e);
    const NodeHessian& nh = hf.nodes[i];
    const double hv = h[i];
    const double g1 = nh.grad[0], g2 = dim == 1 ? 0.0 : nh.grad[1];
    const double rho2 = hv * hv + g1 * g1 + g2 * g2;
    const double rho_a = std::pow(rho2, 0.5 * a);
    const double rho_a2 = std::pow(rho2, 0.5 * a - 1.0);
    const double fv = ft[i];
    // coefficient of <grad h, grad phi>
    const double grad_coeff = fv * a * std::pow(hv, p - 1.0) * rho_a2;
    const auto sg = node_sigma_grad(nh, dim, spec.k);
    s11[e] = sg[0];
    s12[e] = sg[1];
    s22[e] = sg[2];
    const double trace_s = dim == 1 ? sg[0] : sg[0] + sg[2];
    c0[e] = trace_s - fv * ((p - 1.0) * std::pow(hv, p - 2.0) * rho_a + a * std::pow(hv, p) * rho_a2);
    c_first1[e] = -grad_coeff * g1;
    c_first2[e] = -grad_coeff * g2;
  }

  const auto& ops = g.ops();
  SparseRowMatrix id(n, n);
  id.setIdentity();
  if (dim == 1) {
    SparseRowMatrix j = s11.asDiagonal() * ops.d_theta2;
    j += c_first1.asDiagonal() * ops.d_theta;
    j += c0.asDiagonal() * id;
    j.makeCompressed();
    return j;
  }
  const Eigen::VectorXd& sec = g.sec_lat();
  const Eigen::VectorXd& tan = g.tan_lat();
  const Eigen::VectorXd c_latlon = 2.0 * s12.cwiseProduct(sec);
  const Eigen::VectorXd c_lon = 2.0 * s12.cwiseProduct(sec).cwiseProduct(tan) + c_first2.cwiseProduct(sec);
  const Eigen::VectorXd c_lon2 = s22.cwiseProduct(sec).cwiseProduct(sec);
  const Eigen::VectorXd c_lat = -s22.cwiseProduct(tan) + c_first1;

  SparseRowMatrix j = s11.asDiagonal() * ops.d_lat2;
  j += c_lon2.asDiagonal() * ops.d_lon2;
  j += c_lat.asDiagonal() * ops.d_lat;
  j += c_lon.asDiagonal() * ops.d_lon;
  if (spec.k > 1) j += c_latlon.asDiagonal() * ops.d_latlon;
  j += c0.asDiagonal() * id;
  j.makeCompressed();
  return j;
}

Eigen::MatrixXd assemble_jacobian(const ProblemSpec& spec, const GridFunction& h, double t) {
  return Eigen::MatrixXd(assemble_jacobian_sparse(spec, h, t));
}

F1Report validate_f1(const ProblemSpec& spec) {
  const double e = spec.homotopy_exponent();
  if (e <= 0.0) throw UnsupportedParameterError("(f1) check requires k + p - 1 > 0");
  Eigen::VectorXd gv(spec.f.values().size());
  for (Eigen::Index i = 0; i < gv.size(); ++i) gv[i] = std::pow(spec.f.values()[i], -1.0 / e);
  const HessianField hf = hessian_field(spec.f.with_values(std::move(gv)));
  F1Report rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hf.size(); ++i) {
    if (hf.nodes[i].eig[0] < rep.worst_margin) {
      rep.worst_margin = hf.nodes[i].eig[0];
      rep.worst_node = i;
    }
  }
  rep.satisfied = rep.worst_margin >= -1e-8;
  return rep;
}

}  // namespace cmk
