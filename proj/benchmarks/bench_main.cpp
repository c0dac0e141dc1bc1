#include <benchmark/benchmark.h>

#include <cmath>

#include "cmk/continuation.hpp"
#include "cmk/diagnostics.hpp"
#include "cmk/geometry.hpp"
#include "cmk/newton.hpp"

using namespace cmk;

namespace {

GridPtr sphere(int ml) { return build_grid({2, 0, ml, 2 * ml, LatitudeScheme::kSecondOrder}); }

GridFunction smooth_body(const GridPtr& g) {
  return GridFunction::sample(g, [](const Vec3& x) { return std::sqrt(1.2 * x[0] * x[0] + x[1] * x[1] + 0.9 * x[2] * x[2]); });
}

ProblemSpec problem(const GridPtr& g, int k) {
  return ProblemSpec(2, k, 1.5, 2.0, GridFunction::sample(g, [](const Vec3& x) { return 2.0 + 0.3 * x[2] * x[2]; }));
}

void BM_HessianField(benchmark::State& state) {
  const GridFunction h = smooth_body(sphere(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(hessian_field(h));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(h.values().size()));
}
BENCHMARK(BM_HessianField)->Arg(16)->Arg(32)->Arg(64);

void BM_Residual(benchmark::State& state) {
  const GridPtr g = sphere(static_cast<int>(state.range(0)));
  const ProblemSpec spec = problem(g, 2);
  const GridFunction h = smooth_body(g);
  for (auto _ : state) benchmark::DoNotOptimize(residual(spec, h, 0.5));
}
BENCHMARK(BM_Residual)->Arg(16)->Arg(32)->Arg(64);

void BM_JacobianSparse(benchmark::State& state) {
  const GridPtr g = sphere(static_cast<int>(state.range(0)));
  const ProblemSpec spec = problem(g, 2);
  const GridFunction h = smooth_body(g);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_jacobian_sparse(spec, h, 0.5));
}
BENCHMARK(BM_JacobianSparse)->Arg(16)->Arg(32);

void BM_JacobianDense(benchmark::State& state) {
  const GridPtr g = sphere(static_cast<int>(state.range(0)));
  const ProblemSpec spec = problem(g, 2);
  const GridFunction h = smooth_body(g);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_jacobian(spec, h, 0.5));
}
BENCHMARK(BM_JacobianDense)->Arg(16)->Arg(32);

void BM_SolveLinear(benchmark::State& state) {
  const GridPtr g = sphere(static_cast<int>(state.range(0)));
  const ProblemSpec spec = problem(g, 1);
  const Eigen::MatrixXd jac = assemble_jacobian(spec, smooth_body(g), 0.5);
  const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(jac.rows());
  for (auto _ : state) benchmark::DoNotOptimize(solve_linear(jac, rhs));
}
BENCHMARK(BM_SolveLinear)->Arg(12)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Continuation(benchmark::State& state) {
  const ProblemSpec spec = problem(sphere(static_cast<int>(state.range(0))), 1);
  for (auto _ : state) benchmark::DoNotOptimize(continue_path(spec));
}
BENCHMARK(BM_Continuation)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  const ProblemSpec spec = problem(sphere(static_cast<int>(state.range(0))), 1);
  for (auto _ : state) benchmark::DoNotOptimize(l0_spectrum(spec));
}
BENCHMARK(BM_Spectrum)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_RadialFunction(benchmark::State& state) {
  const GridFunction h = smooth_body(sphere(static_cast<int>(state.range(0))));
  std::vector<Vec3> dirs;
  for (int i = 0; i < 64; ++i) {
    const double z = -1.0 + 2.0 * (i + 0.5) / 64.0, s = std::sqrt(1.0 - z * z);
    dirs.push_back({s * std::cos(2.4 * i), s * std::sin(2.4 * i), z});
  }
  for (auto _ : state) benchmark::DoNotOptimize(radial_function(h, dirs));
}
BENCHMARK(BM_RadialFunction)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
