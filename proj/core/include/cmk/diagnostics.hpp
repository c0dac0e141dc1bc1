#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmk/continuation.hpp"
#include "cmk/problem.hpp"

namespace cmk {

/// Outcome of the spectral Aleksandrov-Fenchel test
///   k int f^2 h sigma_k  <=  int h^2 sigma_k^{ij} f_i f_j,
/// for f with int f h sigma_k = 0.
struct AfCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  double subtracted_mean = 0.0;
  bool equality_case = false;
};

struct DiagnosticsReport {
  double R = 0.0;
  double r = 0.0;
  double ratio = 0.0;
  std::optional<double> zeta_max;          // max (h^2 + |grad h|^2) / h^gamma
  std::optional<double> zeta_bound_ratio;  // zeta_max / R^{2 - gamma}
  double c2_quantity = 0.0;                // max (Delta h + n h)
  double min_b_eig = 0.0;
  std::optional<double> gamma_used;        // (p - 1) / k
  bool f1_satisfied = false;
  std::optional<AfCheck> af_check;
  std::vector<std::string> notes;
};

/// Measured a-priori quantities of h. No verdicts are attached to them.
DiagnosticsReport run_diagnostics(const ProblemSpec& spec, const GridFunction& h);

/// Projects testfn to int f h sigma_k = 0 (reporting the subtracted mean)
/// and evaluates both sides. Throws AdmissibilityError unless b(h) is in
/// Gamma_k everywhere. equality_case is |slack| <= equality_tol * max(1, rhs).
AfCheck af_inequality_check(const GridFunction& h, int k, const GridFunction& testfn, double equality_tol = 1e-8);

struct LinearFamilyFit {
  Vec3 v{};
  double relative_residual = 0.0;
};

/// Weighted least-squares fit of f by <x / h(x), v>.
LinearFamilyFit fit_linear_family(const GridFunction& h, const GridFunction& f);

struct Spectrum {
  std::vector<double> eigenvalues;  // real parts, descending
  double max_imag = 0.0;
};

/// Eigenvalues of the Jacobian at h = 1, t = 0 restricted to even functions.
Spectrum l0_spectrum(const ProblemSpec& spec);

/// Continuous-operator predictions at h = 1:
/// C(n-1,k-1) (n(q-p)/k - l(l+n-1)) for spherical-harmonic degree l.
double l0_analytic_eigenvalue(int n, int k, double p, double q, int degree);

/// f = sigma_k(b(h*)) / (h*^{p-1} rho^{k+1-q}), which makes h* an exact
/// discrete solution at t = 1. Throws AdmissibilityError when b(h*) leaves
/// Gamma_k and PreconditionError when h* is not positive and even.
GridFunction manufacture(const GridFunction& h_star, int k, double p, double q);

struct IsotropicWindow {
  bool holds = false;
  double q_bound = 0.0;
  std::string note;
};

/// 1 - k <= p and q <= k + 1 + 2k - 2n - 2 + 2 sqrt((n-k+1)^2 + (k+p-1)/(n+2)),
/// one of them strict, with n >= 2 and 1 <= k < n.
IsotropicWindow isotropic_window(int n, int k, double p, double q);

struct IsotropicReport {
  GridFunction h_final;
  double r_star = 0.0;
  double sphere_radius_error = 0.0;  // max |h - r*| / r*
  bool converged = false;
  IsotropicWindow window;
  SolveTrace trace;
  std::string failure;
};

/// C(n,k)^{-1/(q-p)}; throws UnsupportedParameterError for q == p.
double isotropic_radius(int n, int k, double p, double q);

/// Continuation with f = 1, compared against the round solution.
IsotropicReport isotropic_experiment(const ProblemSpec& spec);

/// h0 = r* (1 + amplitude * delta) with delta a random even field
/// (max |delta| = 1), corrected by Newton at t = 1.
IsotropicReport isotropic_restart(const ProblemSpec& spec, std::uint64_t seed, double amplitude);

/// Random smooth even field built from quadratic and quartic forms,
/// normalized to max |delta| = 1.
GridFunction random_even_field(const GridPtr& grid, std::uint64_t seed);

}  // namespace cmk
