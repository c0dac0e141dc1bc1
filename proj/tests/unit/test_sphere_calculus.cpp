#include <gtest/gtest.h>

#include <cmath>

#include "cmk/sphere_calculus.hpp"

using namespace cmk;

namespace {

GridPtr sphere(int ml, LatitudeScheme s = LatitudeScheme::kSecondOrder) { return build_grid({2, 0, ml, 2 * ml, s}); }
GridPtr circle(int m) { return build_grid({1, m, 0, 0, LatitudeScheme::kSecondOrder}); }

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

const Vec3 kTilted{0.48, -0.6, 0.64};

double max_abs_b(const HessianField& hf, bool skip_pole_rows, const SphereGrid& g) {
  double m = 0.0;
  for (std::size_t i = 0; i < hf.size(); ++i) {
    if (skip_pole_rows && (g.row(i) == 0 || g.row(i) == g.resolution().m_lat - 1)) continue;
    const auto& n = hf.nodes[i];
    m = std::max({m, std::abs(n.b11), std::abs(n.b12), std::abs(n.b22)});
  }
  return m;
}

}  // namespace

TEST(Grad, ConstantIsZero) {
  for (const GridPtr& g : {sphere(16), circle(32)}) {
    const GradientField df = grad(GridFunction::constant(g, 3.7));
    for (std::size_t i = 0; i < g->size(); ++i) EXPECT_EQ(df.norm_squared(i), 0.0);
  }
}

TEST(Grad, CircleSine) {
  const GridPtr g = circle(64);
  const GradientField df = grad(GridFunction::sample(g, [](const Vec3& x) { return x[1]; }));
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(df.components[i][0], g->coord(i)[0], 1e-10);
}

TEST(Grad, HeightFunctionConvergesAtSecondOrder) {
  double err[2];
  for (int r = 0; r < 2; ++r) {
    const GridPtr g = sphere(16 << r);
    const GridFunction h = GridFunction::sample(g, [](const Vec3& x) { return x[2]; });
    const GradientField df = grad(h);
    err[r] = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) err[r] = std::max(err[r], std::abs(df.norm_squared(i) - (1.0 - h[i] * h[i])));
  }
  EXPECT_LT(err[1], 0.3 * err[0]);
  EXPECT_LT(err[0], 4.0 * std::pow(sphere(16)->spacing(), 2));
}

TEST(Hessian, RoundSphere) {
  for (const GridPtr& g : {sphere(16), circle(32), sphere(12, LatitudeScheme::kSpectral)}) {
    for (double r : {1.0, 2.5}) {
      const HessianField hf = hessian_field(GridFunction::constant(g, r));
      for (std::size_t i = 0; i < hf.size(); ++i) {
        for (double lam : hf.eigenvalues(i)) EXPECT_EQ(lam, r);
        EXPECT_EQ(hf.nodes[i].b12, 0.0);
      }
    }
  }
}

TEST(Hessian, PointSupportFunctionSpectral) {
  const GridPtr g = sphere(16, LatitudeScheme::kSpectral);
  const HessianField hf = hessian_field(GridFunction::sample(g, [](const Vec3& x) { return dot(x, kTilted); }));
  EXPECT_LT(max_abs_b(hf, false, *g), 1e-9);
  const GridPtr c = circle(32);
  const HessianField hc = hessian_field(GridFunction::sample(c, [](const Vec3& x) { return 0.6 * x[0] - 0.8 * x[1]; }));
  EXPECT_LT(max_abs_b(hc, false, *c), 1e-12);
}

TEST(Hessian, PointSupportFunctionSecondOrder) {
  // Zonal direction: second order everywhere. Tilted: second order away from
  // the rows adjacent to the poles.
  double zonal[2], tilted[2];
  for (int r = 0; r < 2; ++r) {
    const GridPtr g = sphere(16 << r);
    zonal[r] = max_abs_b(hessian_field(GridFunction::sample(g, [](const Vec3& x) { return x[2]; })), false, *g);
    tilted[r] = max_abs_b(hessian_field(GridFunction::sample(g, [](const Vec3& x) { return dot(x, kTilted); })), true, *g);
  }
  EXPECT_GT(zonal[0] / zonal[1], 3.0);
  EXPECT_GT(tilted[0] / tilted[1], 1.8);
  EXPECT_LT(zonal[1], 0.05);
}

// Analytic b for zonal h(lat): b11 = h'' + h, b22 = -tan(lat) h' + h, b12 = 0.
TEST(Hessian, ZonalOracle) {
  const double eps = 0.05;
  double err[2];
  for (int r = 0; r < 2; ++r) {
    const GridPtr g = sphere(16 << r);
    const HessianField hf = hessian_field(GridFunction::sample(g, [eps](const Vec3& x) { return 1.0 + eps * (3.0 * x[2] * x[2] - 1.0) / 2.0; }));
    err[r] = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double s = std::sin(g->lat(i)), c = std::cos(g->lat(i));
      const double h = 1.0 + eps * (3.0 * s * s - 1.0) / 2.0;
      const double d1 = 3.0 * eps * s * c, d2 = 3.0 * eps * (c * c - s * s);
      const auto& n = hf.nodes[i];
      err[r] = std::max({err[r], std::abs(n.b11 - (d2 + h)), std::abs(n.b22 - (h - s / c * d1)), std::abs(n.b12)});
    }
  }
  EXPECT_GT(err[0] / err[1], 3.0);
  EXPECT_LT(err[0] / err[1], 5.0);
}

TEST(Hessian, TraceMatchesLaplacian) {
  const GridPtr g = sphere(16);
  const GridFunction h = GridFunction::sample(g, [](const Vec3& x) { return 1.0 + 0.2 * x[0] * x[1] + 0.1 * x[2] * x[2]; });
  const HessianField hf = hessian_field(h);
  const GridFunction lap = laplace_beltrami(h);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(hf.nodes[i].trace(2), lap[i] + 2.0 * h[i], 1e-14);
}

TEST(Hessian, LongitudeShiftEquivariance) {
  const GridPtr g = sphere(16);
  const GridFunction h = GridFunction::sample(g, [](const Vec3& x) { return 1.2 + 0.1 * x[0] * x[0] - 0.05 * x[1] * x[2]; });
  const GridSymmetry s = GridSymmetry::longitude_shift(5);
  const HessianField a = hessian_field(apply_symmetry(h, s));
  const HessianField b = hessian_field(h);
  const auto perm = symmetry_permutation(*g, s);
  for (std::size_t i = 0; i < g->size(); ++i) {
    EXPECT_NEAR(a.nodes[i].b11, b.nodes[perm[i]].b11, 1e-12);
    EXPECT_NEAR(a.nodes[i].b22, b.nodes[perm[i]].b22, 1e-12);
    EXPECT_NEAR(a.nodes[i].b12, b.nodes[perm[i]].b12, 1e-12);
  }
}

TEST(Laplacian, LowDegreeHarmonics) {
  const GridPtr gs = sphere(16, LatitudeScheme::kSpectral);
  const GridFunction y1 = GridFunction::sample(gs, [](const Vec3& x) { return dot(x, kTilted); });
  EXPECT_LT((laplace_beltrami(y1).values() + 2.0 * y1.values()).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT(laplace_beltrami(GridFunction::constant(gs, 1.0)).values().cwiseAbs().maxCoeff(), 1e-15);

  double err[2];
  for (int r = 0; r < 2; ++r) {
    const GridPtr g = sphere(16 << r);
    const GridFunction y2 = GridFunction::sample(g, [](const Vec3& x) { return 3.0 * x[2] * x[2] - 1.0; });
    err[r] = (laplace_beltrami(y2).values() + 6.0 * y2.values()).cwiseAbs().maxCoeff();
  }
  EXPECT_GT(err[0] / err[1], 3.0);

  const GridPtr c = circle(32);
  const GridFunction cos2 = GridFunction::sample(c, [](const Vec3& x) { return x[0] * x[0] - x[1] * x[1]; });
  EXPECT_LT((laplace_beltrami(cos2).values() + 4.0 * cos2.values()).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Laplacian, IntegrationByParts) {
  const auto u_fn = [](const Vec3& x) { return 1.0 + x[0] * x[0] * x[1] + 0.3 * x[1]; };
  const auto v_fn = [](const Vec3& x) { return std::exp(0.5 * x[0]) + x[2] * x[2]; };
  const GridPtr c = circle(64);
  const GridFunction uc = GridFunction::sample(c, u_fn), vc = GridFunction::sample(c, v_fn);
  const double defect_c = std::abs(integrate(uc.with_values(uc.values().cwiseProduct(laplace_beltrami(vc).values()))) -
                                   integrate(vc.with_values(vc.values().cwiseProduct(laplace_beltrami(uc).values()))));
  EXPECT_LE(defect_c, 1e-6 * uc.values().cwiseAbs().maxCoeff() * vc.values().cwiseAbs().maxCoeff());

  double defect[2];
  for (int r = 0; r < 2; ++r) {
    const GridPtr g = sphere(16 << r);
    const GridFunction u = GridFunction::sample(g, u_fn), v = GridFunction::sample(g, v_fn);
    defect[r] = std::abs(integrate(u.with_values(u.values().cwiseProduct(laplace_beltrami(v).values()))) -
                         integrate(v.with_values(v.values().cwiseProduct(laplace_beltrami(u).values()))));
  }
  EXPECT_LT(defect[1], 0.35 * defect[0]);
}

TEST(Sym2Eigenvalues, ClosedForm) {
  const auto e = sym2_eigenvalues(2.0, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(e[0], 1.0);
  EXPECT_DOUBLE_EQ(e[1], 3.0);
  const auto d = sym2_eigenvalues(-1.0, 0.0, 4.0);
  EXPECT_DOUBLE_EQ(d[0], -1.0);
  EXPECT_DOUBLE_EQ(d[1], 4.0);
}
