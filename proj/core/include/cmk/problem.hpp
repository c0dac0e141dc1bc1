#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cmk/sphere_calculus.hpp"
#include "cmk/sphere_grid.hpp"

namespace cmk {

struct ContinuationControls {
  double dt0 = 0.1;
  double dt_min = 1e-4;
  double dt_max = 0.5;
};

/// sigma_k(grad^2 h + h I) = f h^{p-1} (h^2 + |grad h|^2)^{(k+1-q)/2} on S^n.
struct ProblemSpec {
  ProblemSpec(int n_, int k_, double p_, double q_, GridFunction f_)
      : n(n_), k(k_), p(p_), q(q_), f(std::move(f_)) {}

  int n;
  int k;
  double p;
  double q;
  GridFunction f;
  double tol_newton = 1e-10;
  int max_newton = 30;
  ContinuationControls continuation;

  const GridPtr& grid() const { return f.grid_ptr(); }
  /// k + p - 1, the exponent of the homotopy interpolation.
  double homotopy_exponent() const { return k + p - 1.0; }
  /// 1 < p < q <= k + 1.
  bool in_existence_range() const { return 1.0 < p && p < q && q <= k + 1.0; }

  /// Throws PreconditionError / UnsupportedParameterError on hard violations:
  /// grid dimension != n, k outside [1, n], f <= 0 or not even, k + p - 1 <= 0.
  void validate() const;
  /// Soft findings (p == q, outside the existence range, ...).
  std::vector<std::string> warnings() const;
};

struct ResidualReport {
  GridFunction residual;
  double linf = 0.0;
  double l2 = 0.0;
};

struct AdmissibilityReport {
  /// min over nodes of min_{i <= k} sigma_i(lambda(b)).
  double margin = 0.0;
  std::size_t worst_node = 0;
  bool admissible() const { return margin > 0.0; }
};

struct F1Report {
  bool satisfied = false;
  double worst_margin = 0.0;
  std::size_t worst_node = 0;
};

/// f_t = [(1-t) C(n,k)^{-1/e} + t f^{-1/e}]^{-e}, e = k + p - 1. Returns the
/// constant C(n,k) at t == 0 and f itself at t == 1.
GridFunction homotopy_f(const ProblemSpec& spec, double t);

/// F_t(h) = sigma_k(b(h)) - f_t h^{p-1} rho^{k+1-q}, rho^2 = h^2 + |grad h|^2.
/// Throws DomainError if h <= 0 anywhere.
ResidualReport residual(const ProblemSpec& spec, const GridFunction& h, double t);

/// Residual against explicit data f (no homotopy), for verification.
ResidualReport residual_with_data(const ProblemSpec& spec, const GridFunction& h, const GridFunction& data);

/// Frechet derivative of F_t at h as a dense matrix over grid values:
///   phi -> sigma_k^{ij} (grad^2 phi + phi I)_ij
///          - f_t [(p-1) h^{p-2} rho^a phi + a h^{p-1} rho^{a-2} (h phi + <grad h, grad phi>)]
/// with a = k + 1 - q. Throws AdmissibilityError if b(h) leaves Gamma_k.
Eigen::MatrixXd assemble_jacobian(const ProblemSpec& spec, const GridFunction& h, double t);

/// The same operator in sparse form.
SparseRowMatrix assemble_jacobian_sparse(const ProblemSpec& spec, const GridFunction& h, double t);

AdmissibilityReport admissibility(const HessianField& hf, int k);

/// sigma_k of the node's b (closed forms for n <= 2).
double node_sigma(const NodeHessian& nh, int dim, int k);

/// Checks grad^2 g + g I >= 0 for g = f^{-1/(k+p-1)}. Advisory only.
F1Report validate_f1(const ProblemSpec& spec);

}  // namespace cmk
