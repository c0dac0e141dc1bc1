#include <gtest/gtest.h>

#include <cmath>

#include "cmk/diagnostics.hpp"
#include "cmk/error.hpp"
#include "cmk/symfunc.hpp"

using namespace cmk;

namespace {

GridPtr sphere(int ml = 12, LatitudeScheme s = LatitudeScheme::kSecondOrder) { return build_grid({2, 0, ml, 2 * ml, s}); }
GridPtr circle(int m = 32) { return build_grid({1, m, 0, 0, LatitudeScheme::kSecondOrder}); }

}  // namespace

TEST(RunDiagnostics, RoundBody) {
  const double r = 1.3;
  ProblemSpec spec(2, 1, 1.5, 2.0, GridFunction::constant(sphere(), 1.0));
  const DiagnosticsReport d = run_diagnostics(spec, GridFunction::constant(spec.grid(), r));
  EXPECT_DOUBLE_EQ(d.R, r);
  EXPECT_DOUBLE_EQ(d.r, r);
  EXPECT_DOUBLE_EQ(d.ratio, 1.0);
  ASSERT_TRUE(d.zeta_max && d.zeta_bound_ratio && d.gamma_used);
  EXPECT_DOUBLE_EQ(*d.gamma_used, 0.5);
  EXPECT_NEAR(*d.zeta_max, std::pow(r, 1.5), 1e-14);
  EXPECT_NEAR(*d.zeta_bound_ratio, 1.0, 1e-14);
  EXPECT_NEAR(d.c2_quantity, 2.0 * r, 1e-14);
  EXPECT_NEAR(d.min_b_eig, r, 1e-14);
}

TEST(RunDiagnostics, ZonalBody) {
  ProblemSpec spec(2, 2, 1.5, 2.0, GridFunction::constant(sphere(), 1.0));
  const GridFunction h = GridFunction::sample(spec.grid(), [](const Vec3& x) { return 1.0 + 0.1 * (3.0 * x[2] * x[2] - 1.0) / 2.0; });
  const DiagnosticsReport d = run_diagnostics(spec, h);
  EXPECT_GT(d.ratio, 1.0);
  EXPECT_GE(d.R, d.r);
  EXPECT_TRUE(std::isfinite(*d.zeta_max));
  EXPECT_GT(d.min_b_eig, 0.0);
}

TEST(RunDiagnostics, NonConvexStillReports) {
  ProblemSpec spec(2, 1, 1.5, 2.0, GridFunction::constant(sphere(), 1.0));
  const GridFunction h = GridFunction::sample(spec.grid(), [](const Vec3& x) { return 1.0 + 0.9 * (35 * std::pow(x[2], 4) - 30 * x[2] * x[2] + 3) / 8; });
  const DiagnosticsReport d = run_diagnostics(spec, h);
  EXPECT_LT(d.min_b_eig, 0.0);
  EXPECT_FALSE(d.af_check.has_value());
}

TEST(AfCheck, RoundSphere) {
  const GridPtr g = sphere(16, LatitudeScheme::kSpectral);
  const GridFunction h = GridFunction::constant(g, 1.0);
  for (int k : {1, 2}) {
    // linear test functions are the equality case
    const AfCheck lin = af_inequality_check(h, k, GridFunction::sample(g, [](const Vec3& x) { return 0.3 * x[0] + x[2]; }));
    EXPECT_TRUE(lin.equality_case) << lin.slack;
    EXPECT_NEAR(lin.subtracted_mean, 0.0, 1e-12);
    const AfCheck quad = af_inequality_check(h, k, GridFunction::sample(g, [](const Vec3& x) { return x[2] * x[2]; }));
    EXPECT_GT(quad.slack, 1e-3);
    EXPECT_FALSE(quad.equality_case);
    EXPECT_NEAR(quad.subtracted_mean, 1.0 / 3.0, 1e-12);
  }
}

TEST(AfCheck, RandomPairsOnConvexBodies) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GridPtr g = seed % 2 ? circle(48) : sphere(16, LatitudeScheme::kSpectral);
    const GridFunction h = GridFunction::sample(g, [](const Vec3& x) { return std::sqrt(1.0 + 0.5 * x[0] * x[0] + 0.2 * x[1] * x[1]); });
    const GridFunction lin = GridFunction::sample(g, [](const Vec3& x) { return x[0]; });
    const GridFunction f = lin.with_values(lin.values() + random_even_field(g, seed).values());
    const AfCheck c = af_inequality_check(h, 1, f);
    EXPECT_GE(c.slack, -1e-8 * std::max(1.0, c.rhs)) << seed;
  }
}

TEST(AfCheck, RejectsNonConvex) {
  const GridPtr g = sphere();
  const GridFunction h = GridFunction::sample(g, [](const Vec3& x) { return 1.0 + 0.9 * (35 * std::pow(x[2], 4) - 30 * x[2] * x[2] + 3) / 8; });
  EXPECT_THROW(af_inequality_check(h, 1, GridFunction::constant(g, 1.0)), AdmissibilityError);
}

TEST(LinearFamily, RecoversTranslationVector) {
  const GridPtr g = sphere(12);
  const GridFunction h = GridFunction::sample(g, [](const Vec3& x) { return 1.0 + 0.1 * x[2] * x[2]; });
  const Vec3 v{0.2, -0.4, 1.0};
  const GridFunction f = GridFunction::sample(g, [&](const Vec3& x) {
    const double hx = 1.0 + 0.1 * x[2] * x[2];
    return (v[0] * x[0] + v[1] * x[1] + v[2] * x[2]) / hx;
  });
  const LinearFamilyFit fit = fit_linear_family(h, f);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(fit.v[i], v[i], 1e-12);
  EXPECT_LT(fit.relative_residual, 1e-12);
  EXPECT_GT(fit_linear_family(h, GridFunction::sample(g, [](const Vec3& x) { return x[2] * x[2]; })).relative_residual, 0.5);
}

TEST(Spectrum, MatchesHarmonicPredictions) {
  const double p = 1.5, q = 2.0;
  ProblemSpec spec(2, 1, p, q, GridFunction::constant(sphere(16, LatitudeScheme::kSpectral), 1.0));
  const Spectrum s = l0_spectrum(spec);
  ASSERT_GE(s.eigenvalues.size(), 6u);
  EXPECT_LT(s.max_imag, 1e-8);
  EXPECT_NEAR(s.eigenvalues[0], l0_analytic_eigenvalue(2, 1, p, q, 0), 1e-8);
  // degree 2 has multiplicity 5
  for (int i = 1; i <= 5; ++i) EXPECT_NEAR(s.eigenvalues[i], l0_analytic_eigenvalue(2, 1, p, q, 2), 1e-6);
  EXPECT_LT(s.eigenvalues[6], s.eigenvalues[5] - 1.0);
}

TEST(Spectrum, EqualExponentsHaveZeroTop) {
  ProblemSpec spec(2, 1, 2.0, 2.0, GridFunction::constant(sphere(24), 1.0));
  const Spectrum s = l0_spectrum(spec);
  EXPECT_NEAR(s.eigenvalues[0], 0.0, 1e-10);
  EXPECT_NEAR(s.eigenvalues[1], l0_analytic_eigenvalue(2, 1, 2.0, 2.0, 2), 0.02 * 6.0);
  EXPECT_EQ(l0_analytic_eigenvalue(2, 2, 1.5, 2.5, 1), 1.0 * (2.0 * 1.0 / 2.0 - 2.0));
}

TEST(Manufacture, RoundAndZonal) {
  const GridPtr g = sphere(12);
  const double r = 1.4, p = 1.5, q = 2.3;
  for (int k : {1, 2}) {
    const GridFunction f = manufacture(GridFunction::constant(g, r), k, p, q);
    EXPECT_LT((f.values().array() - binom(2, k) * std::pow(r, q - p)).abs().maxCoeff(), 1e-12);
    const GridFunction h = GridFunction::sample(g, [](const Vec3& x) { return 1.0 + 0.15 * x[2] * x[2]; });
    const GridFunction fz = manufacture(h, k, p, q);
    EXPECT_GT(fz.min(), 0.0);
    EXPECT_LT(antipodal_defect(fz), 1e-13);
    ProblemSpec spec(2, k, p, q, fz);
    EXPECT_LE(residual(spec, h, 1.0).linf, 1e-13);
  }
  EXPECT_THROW(manufacture(GridFunction::sample(g, [](const Vec3& x) { return 1.0 + 0.1 * x[2]; }), 1, p, q), PreconditionError);
}

TEST(Isotropic, Window) {
  EXPECT_NEAR(isotropic_window(2, 1, 1.2, 2.0).q_bound, 2.147, 1e-3);
  EXPECT_NEAR(isotropic_window(2, 1, 1.5, 2.0).q_bound, 2.183, 1e-3);
  EXPECT_NEAR(isotropic_window(2, 1, 2.0, 2.0).q_bound, 2.243, 1e-3);
  EXPECT_TRUE(isotropic_window(2, 1, 1.5, 2.1).holds);
  EXPECT_FALSE(isotropic_window(2, 1, 1.5, 2.5).holds);
  EXPECT_FALSE(isotropic_window(1, 1, 1.5, 2.0).holds);
  EXPECT_FALSE(isotropic_window(2, 2, 1.5, 2.0).holds);
}

TEST(Isotropic, RadiusAndExperiment) {
  EXPECT_THROW(isotropic_radius(2, 1, 2.0, 2.0), UnsupportedParameterError);
  EXPECT_NEAR(isotropic_radius(2, 1, 1.5, 2.0), 0.25, 1e-15);
  ProblemSpec spec(2, 1, 1.5, 2.0, GridFunction::constant(sphere(), 1.0));
  const IsotropicReport rep = isotropic_experiment(spec);
  ASSERT_TRUE(rep.converged) << rep.failure;
  EXPECT_LE(rep.sphere_radius_error, 1e-6);
  EXPECT_TRUE(rep.window.holds);

  ProblemSpec s1(1, 1, 1.5, 2.5, GridFunction::constant(circle(), 1.0));
  const IsotropicReport rep1 = isotropic_experiment(s1);
  ASSERT_TRUE(rep1.converged) << rep1.failure;
  EXPECT_LE(rep1.sphere_radius_error, 1e-8);
  EXPECT_FALSE(rep1.window.holds);

  ProblemSpec not_flat(2, 1, 1.5, 2.0, GridFunction::constant(sphere(), 2.0));
  EXPECT_THROW(isotropic_experiment(not_flat), PreconditionError);
}

TEST(Isotropic, RestartReturnsToSphere) {
  ProblemSpec spec(2, 1, 1.5, 2.1, GridFunction::constant(sphere(), 1.0));
  const IsotropicReport rep = isotropic_restart(spec, 5, 0.05);
  ASSERT_TRUE(rep.converged) << rep.failure;
  EXPECT_LE(rep.sphere_radius_error, 1e-6);
}

TEST(RandomEvenField, Normalized) {
  const GridPtr g = sphere();
  const GridFunction d = random_even_field(g, 3);
  EXPECT_NEAR(d.values().cwiseAbs().maxCoeff(), 1.0, 1e-15);
  EXPECT_EQ(antipodal_defect(d), 0.0);
  EXPECT_EQ(random_even_field(g, 3).values(), d.values());
  EXPECT_NE(random_even_field(g, 4).values(), d.values());
}
