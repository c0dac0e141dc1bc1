#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmk/newton.hpp"
#include "cmk/problem.hpp"

namespace cmk {

struct TraceStep {
  double t = 0.0;
  int newton_iterations = 0;
  double residual = 0.0;
  double min_b_eig = 0.0;
  double R = 0.0;
  double r = 0.0;
  double ratio = 0.0;
};

struct SolveTrace {
  std::vector<TraceStep> steps;  // accepted steps after t = 0, t strictly increasing
  double wall_seconds = 0.0;
};

struct ContinuationResult {
  SolveTrace trace;
  /// Last accepted solution (h = 1 if nothing was accepted).
  GridFunction h;
  bool success = false;
  double t_reached = 0.0;
  std::string failure;
  std::vector<std::string> warnings;
};

struct PredictorResult {
  GridFunction h;
  bool clamped = false;  // fell back to the previous iterate
};

struct PathPoint {
  double t;
  GridFunction h;
};

/// Secant extrapolation through the two latest accepted points, then
/// even_project; falls back to the latest point if any node becomes <= 0.
/// With a single point (or coincident t) returns that point's h.
PredictorResult predictor(const PathPoint& older, const PathPoint& newer, double t_next);

/// Follows the homotopy from h = 1 at t = 0 to t = 1.
///
/// A step that fails its Newton corrector halves dt (abort below dt_min);
/// a step corrected in <= 3 iterations grows dt by 1.5 up to dt_max. Before
/// each step, if the current h already satisfies the t = 1 problem to
/// tol_newton, the path jumps to t = 1.
ContinuationResult continue_path(const ProblemSpec& spec);

/// TraceStep summary of an accepted h.
TraceStep summarize_step(double t, int iterations, double residual_linf, const GridFunction& h);

}  // namespace cmk
