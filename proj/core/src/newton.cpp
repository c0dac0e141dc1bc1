#include "cmk/newton.hpp"

#include <cmath>
#include <sstream>

#include "cmk/error.hpp"

namespace cmk {

namespace {

constexpr double kAdmissibilityFloor = 1e-10;
constexpr double kMinDamping = 1e-6;
constexpr double kSlope = 1e-4;

double inf_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

// Solves J delta = rhs for even delta, with the unknowns one value per
// antipodal pair: (P^T J P) d = P^T rhs, delta = P d.
Eigen::VectorXd solve_even(const SphereGrid& g, const Eigen::MatrixXd& jac, const Eigen::VectorXd& rhs) {
  const auto& anti = g.antipodes();
  std::vector<Eigen::Index> pair_of(g.size());
  Eigen::Index m = 0;
  for (std::size_t i = 0; i < anti.size(); ++i) {
    if (i < anti[i]) pair_of[i] = pair_of[anti[i]] = m++;
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  for (Eigen::Index r = 0; r < jac.rows(); ++r) {
    const Eigen::Index pr = pair_of[static_cast<std::size_t>(r)];
    b[pr] += rhs[r];
    for (Eigen::Index c = 0; c < jac.cols(); ++c) a(pr, pair_of[static_cast<std::size_t>(c)]) += jac(r, c);
  }
  const Eigen::VectorXd d = solve_linear(a, b);
  Eigen::VectorXd delta(jac.rows());
  for (Eigen::Index r = 0; r < delta.size(); ++r) delta[r] = d[pair_of[static_cast<std::size_t>(r)]];
  return delta;
}

// The full Jacobian is singular whenever an odd mode is in its kernel (at
// h = 1 this happens for q - p = k), while the problem restricted to even
// functions may still be regular. Only then is the even system solved.
Eigen::VectorXd newton_direction(const SphereGrid& g, const Eigen::MatrixXd& jac, const Eigen::VectorXd& rhs) {
  try {
    return solve_linear(jac, rhs);
  } catch (const SingularMatrixError& full) {
    try {
      return solve_even(g, jac, rhs);
    } catch (const SingularMatrixError&) {
      throw full;
    }
  }
}

}  // namespace

double relative_backward_error(const Eigen::MatrixXd& jac, const Eigen::VectorXd& x, const Eigen::VectorXd& rhs) {
  const double num = (jac * x - rhs).cwiseAbs().maxCoeff();
  const double den = inf_norm(jac) * x.cwiseAbs().maxCoeff() + rhs.cwiseAbs().maxCoeff();
  return den > 0.0 ? num / den : num;
}

Eigen::VectorXd solve_linear(const Eigen::MatrixXd& jac, const Eigen::VectorXd& rhs) {
  if (jac.rows() != jac.cols() || jac.rows() != rhs.size()) throw PreconditionError("solve_linear: shape mismatch");
  if (!jac.allFinite() || !rhs.allFinite()) throw PreconditionError("solve_linear: non-finite input");
  const double norm = inf_norm(jac);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot >= 1e-13 * norm)) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullV);
    const Eigen::Index last = svd.singularValues().size() - 1;
    const Eigen::VectorXd v = svd.matrixV().col(last);
    std::ostringstream os;
    os << "Jacobian is numerically singular (pivot " << min_pivot << ", ||J||_inf " << norm
       << ", smallest singular value " << svd.singularValues()(last) << ")";
    throw SingularMatrixError(os.str(), svd.singularValues()(last), std::vector<double>(v.data(), v.data() + v.size()));
  }
  Eigen::VectorXd x = lu.solve(rhs);
  if (relative_backward_error(jac, x, rhs) > 1e-10) {
    // one round of iterative refinement
    x += lu.solve(rhs - jac * x);
  }
  return x;
}

NewtonResult newton_solve(const ProblemSpec& spec, const GridFunction& h0, double t) {
  if (!(h0.min() > 0.0)) throw PreconditionError("newton_solve: initial guess must be positive");
  const double scale = std::max(1.0, h0.values().cwiseAbs().maxCoeff());
  if (antipodal_defect(h0) > 1e-12 * scale) throw PreconditionError("newton_solve: initial guess must be even");
  GridFunction h = even_project(h0);
  {
    const AdmissibilityReport adm = admissibility(hessian_field(h), spec.k);
    if (!adm.admissible()) {
      std::ostringstream os;
      os << "newton_solve: initial guess not k-admissible at node " << adm.worst_node << " (margin " << adm.margin << ")";
      throw PreconditionError(os.str());
    }
  }

  NewtonResult out{h, false, 0, 0.0, 0.0, {}, {}};
  ResidualReport res = residual(spec, h, t);
  out.final_linf = res.linf;
  out.min_admissibility_margin = admissibility(hessian_field(h), spec.k).margin;
  if (res.linf <= spec.tol_newton) {
    out.converged = true;
    return out;
  }

  for (int it = 0; it < spec.max_newton; ++it) {
    const Eigen::MatrixXd jac = assemble_jacobian(spec, h, t);
    const Eigen::VectorXd delta = newton_direction(h.grid(), jac, -res.residual.values());

    double alpha = 1.0;
    bool accepted = false;
    std::string last_reason;
    while (alpha >= kMinDamping) {
      const Eigen::VectorXd trial_v = h.values() + alpha * delta;
      if (trial_v.minCoeff() > 0.0) {
        GridFunction trial = even_project(h.with_values(trial_v));
        const double margin = admissibility(hessian_field(trial), spec.k).margin;
        if (margin > kAdmissibilityFloor) {
          ResidualReport trial_res = residual(spec, trial, t);
          if (trial_res.linf <= (1.0 - kSlope * alpha) * res.linf) {
            h = std::move(trial);
            res = std::move(trial_res);
            out.min_admissibility_margin = margin;
            accepted = true;
            break;
          }
          last_reason = "insufficient residual decrease";
        } else {
          last_reason = "admissibility lost";
        }
      } else {
        last_reason = "positivity lost";
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      out.h = h;
      out.final_linf = res.linf;
      std::ostringstream os;
      os << "line search failed at iteration " << it + 1 << " (" << last_reason << ", residual " << res.linf << ")";
      out.diagnostic = os.str();
      return out;
    }
    out.iterations = it + 1;
    out.step_history.push_back({alpha, res.linf});
    if (res.linf <= spec.tol_newton) {
      out.h = h;
      out.final_linf = res.linf;
      out.converged = true;
      return out;
    }
  }
  out.h = h;
  out.final_linf = res.linf;
  out.diagnostic = "iteration cap reached (residual " + std::to_string(res.linf) + ")";
  return out;
}

}  // namespace cmk
