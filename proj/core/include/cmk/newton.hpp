#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cmk/problem.hpp"

namespace cmk {

struct NewtonStep {
  double damping = 1.0;
  double residual_linf = 0.0;
};

struct NewtonResult {
  GridFunction h;
  bool converged = false;
  int iterations = 0;
  double final_linf = 0.0;
  double min_admissibility_margin = 0.0;
  std::vector<NewtonStep> step_history;
  /// Empty on success; otherwise why the iteration stopped.
  std::string diagnostic;
};

/// Damped Newton for F_t(h) = 0 at fixed t. Each step solves J delta = -F,
/// halves the damping from 1 until h + a delta stays positive, stays in
/// Gamma_k with margin above 1e-10, and shrinks ||F||_inf by at least the
/// factor (1 - 1e-4 a); the accepted iterate is even-projected.
///
/// When J is singular the step is taken from the system restricted to even
/// functions instead; SingularMatrixError propagates only if that one is
/// singular too. Throws PreconditionError if h0 is not positive, admissible
/// and even.
NewtonResult newton_solve(const ProblemSpec& spec, const GridFunction& h0, double t);

/// Dense LU with partial pivoting. Throws SingularMatrixError when a pivot
/// falls below 1e-13 ||J||_inf; the error carries the right singular vector
/// of the smallest singular value.
Eigen::VectorXd solve_linear(const Eigen::MatrixXd& jac, const Eigen::VectorXd& rhs);

/// ||J x - b||_inf / (||J||_inf ||x||_inf + ||b||_inf).
double relative_backward_error(const Eigen::MatrixXd& jac, const Eigen::VectorXd& x, const Eigen::VectorXd& rhs);

}  // namespace cmk
