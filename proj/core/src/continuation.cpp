#include "cmk/continuation.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "cmk/error.hpp"

namespace cmk {

TraceStep summarize_step(double t, int iterations, double residual_linf, const GridFunction& h) {
  TraceStep s;
  s.t = t;
  s.newton_iterations = iterations;
  s.residual = residual_linf;
  s.min_b_eig = hessian_field(h).min_eigenvalue();
  s.R = h.max();
  s.r = h.min();
  s.ratio = s.R / s.r;
  return s;
}

PredictorResult predictor(const PathPoint& older, const PathPoint& newer, double t_next) {
  if (newer.t == older.t) return {newer.h, false};
  const double w = (t_next - newer.t) / (newer.t - older.t);
  Eigen::VectorXd v = newer.h.values() + w * (newer.h.values() - older.h.values());
  GridFunction pred = even_project(newer.h.with_values(std::move(v)));
  if (!(pred.min() > 0.0)) return {newer.h, true};
  return {std::move(pred), false};
}

ContinuationResult continue_path(const ProblemSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  ContinuationResult out{{}, GridFunction::constant(spec.grid(), 1.0), false, 0.0, {}, spec.warnings()};

  PathPoint older{0.0, out.h};
  PathPoint newer{0.0, out.h};
  double dt = spec.continuation.dt0;

  auto finish = [&]() {
    out.trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  };

  while (newer.t < 1.0) {
    const ResidualReport at_end = residual(spec, newer.h, 1.0);
    if (at_end.linf <= spec.tol_newton) {
      out.trace.steps.push_back(summarize_step(1.0, 0, at_end.linf, newer.h));
      newer = {1.0, newer.h};
      break;
    }

    const double t_next = std::min(1.0, newer.t + dt);
    PredictorResult pred = predictor(older, newer, t_next);
    if (!(admissibility(hessian_field(pred.h), spec.k).margin > 1e-10)) pred = {newer.h, true};

    NewtonResult nr{newer.h, false, 0, 0.0, 0.0, {}, {}};
    try {
      nr = newton_solve(spec, pred.h, t_next);
    } catch (const SingularMatrixError& e) {
      nr.diagnostic = e.what();
    } catch (const AdmissibilityError& e) {
      nr.diagnostic = e.what();
    }

    if (nr.converged) {
      out.trace.steps.push_back(summarize_step(t_next, nr.iterations, nr.final_linf, nr.h));
      older = std::move(newer);
      newer = {t_next, std::move(nr.h)};
      if (nr.iterations <= 3) dt = std::min(dt * 1.5, spec.continuation.dt_max);
      continue;
    }
    dt *= 0.5;
    if (dt < spec.continuation.dt_min) {
      std::ostringstream os;
      os << "step size underflow at t = " << newer.t << " trying t = " << t_next << ": " << nr.diagnostic;
      out.failure = os.str();
      out.h = newer.h;
      out.t_reached = newer.t;
      return finish();
    }
  }

  out.h = newer.h;
  out.t_reached = newer.t;
  out.success = true;
  return finish();
}

}  // namespace cmk
