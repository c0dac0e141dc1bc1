#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cmk/error.hpp"
#include "cmk/symfunc.hpp"

using namespace cmk;

namespace {

using Vec = std::vector<double>;

Vec random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d(0.0, 1.0);
  Vec v(static_cast<std::size_t>(n));
  for (auto& x : v) x = d(rng);
  return v;
}

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = d(rng);
  }
  return 0.5 * (m + m.transpose());
}

}  // namespace

TEST(SigmaK, Examples) {
  EXPECT_DOUBLE_EQ(sigma_k(Vec{1, 1, 1}, 2), 3.0);
  EXPECT_DOUBLE_EQ(sigma_k(Vec{1, 2, 3}, 2), 11.0);
  EXPECT_DOUBLE_EQ(sigma_k(Vec{1, 2, 3}, 0), 1.0);
  EXPECT_DOUBLE_EQ(sigma_k(Vec{1, 2, 3}, 3), 6.0);
  for (int n = 1; n <= 6; ++n) {
    for (int k = 0; k <= n; ++k) {
      const Vec r(static_cast<std::size_t>(n), 1.5);
      EXPECT_NEAR(sigma_k(r, k), binom(n, k) * std::pow(1.5, k), 1e-12 * binom(n, k) * std::pow(1.5, k));
    }
  }
  EXPECT_THROW(sigma_k(Vec{1, 2}, 3), PreconditionError);
  EXPECT_THROW(sigma_k(Vec{1, 2}, -1), PreconditionError);
}

TEST(SigmaK, MatchesSubsetEnumeration) {
  std::mt19937_64 rng(11);
  for (int s = 0; s < 200; ++s) {
    const int n = 1 + s % 7;
    const Vec lam = random_vector(rng, n);
    for (int k = 0; k <= n; ++k) {
      double brute = 0.0;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        double prod = 1.0;
        for (int i = 0; i < n; ++i) {
          if (mask & (1u << i)) prod *= lam[static_cast<std::size_t>(i)];
        }
        brute += prod;
      }
      EXPECT_NEAR(sigma_k(lam, k), brute, 1e-12 * (1.0 + std::abs(brute)));
    }
  }
}

TEST(SigmaKDerivs, Examples) {
  auto d = sigma_k_derivs(Vec{1, 1, 1}, 2);
  EXPECT_EQ(d.grad, (Vec{2, 2, 2}));
  d = sigma_k_derivs(Vec{1, 2, 3}, 2);
  EXPECT_EQ(d.grad, (Vec{5, 4, 3}));
  d = sigma_k_derivs(Vec{0, 2, 3}, 3);
  EXPECT_EQ(d.value, 0.0);
  EXPECT_EQ(d.grad, (Vec{6, 0, 0}));
  EXPECT_EQ(d.matrix_grad(0, 0), 6.0);
  EXPECT_EQ(d.matrix_grad(0, 1), 0.0);
}

TEST(SigmaKDerivs, AgreeWithCentralDifferences) {
  std::mt19937_64 rng(5);
  const double h = 1e-5;
  for (int s = 0; s < 300; ++s) {
    const int n = 2 + s % 6;
    const int k = 1 + s % n;
    Vec lam = random_vector(rng, n);
    const auto d = sigma_k_derivs(lam, k);
    for (int i = 0; i < n; ++i) {
      Vec plus = lam, minus = lam;
      plus[static_cast<std::size_t>(i)] += h;
      minus[static_cast<std::size_t>(i)] -= h;
      const double fd = (sigma_k(plus, k) - sigma_k(minus, k)) / (2.0 * h);
      EXPECT_NEAR(d.grad[static_cast<std::size_t>(i)], fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(SigmaKHessian, AgreesWithDifferencesOfGradient) {
  std::mt19937_64 rng(8);
  const double h = 1e-6;
  for (int s = 0; s < 100; ++s) {
    const int n = 2 + s % 5;
    const int k = 2 + s % (n - 1);
    const Vec lam = random_vector(rng, n);
    const Eigen::MatrixXd hess = sigma_k_hessian(lam, k);
    for (int j = 0; j < n; ++j) {
      Vec plus = lam, minus = lam;
      plus[static_cast<std::size_t>(j)] += h;
      minus[static_cast<std::size_t>(j)] -= h;
      const auto gp = sigma_k_derivs(plus, k).grad, gm = sigma_k_derivs(minus, k).grad;
      for (int i = 0; i < n; ++i) {
        const double fd = (gp[static_cast<std::size_t>(i)] - gm[static_cast<std::size_t>(i)]) / (2.0 * h);
        EXPECT_NEAR(hess(i, j), fd, 1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST(Identities, HoldOnRandomSamples) {
  std::mt19937_64 rng(21);
  for (int s = 0; s < 2000; ++s) {
    const int n = 2 + s % 7;
    const Vec lam = random_vector(rng, n);
    Vec mag(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) mag[i] = std::abs(lam[i]);
    for (int k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < lam.size(); ++i) {
        const double lhs = sigma_k(lam, k + 1);
        const double rhs = sigma_k_deleted(lam, k + 1, i) + lam[i] * sigma_k_deleted(lam, k, i);
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1e-300, sigma_k(mag, k + 1)));
      }
      double s2 = 0.0, s3 = 0.0;
      for (std::size_t i = 0; i < lam.size(); ++i) {
        s2 += lam[i] * sigma_k_deleted(lam, k, i);
        s3 += sigma_k_deleted(lam, k, i);
      }
      EXPECT_LE(std::abs(s2 - (k + 1) * sigma_k(lam, k + 1)), 1e-10 * (k + 1) * sigma_k(mag, k + 1));
      EXPECT_LE(std::abs(s3 - (n - k) * sigma_k(lam, k)), 1e-10 * (n - k) * sigma_k(mag, k));
      if (k >= 1) {
        double s4 = 0.0;
        for (std::size_t i = 0; i < lam.size(); ++i) s4 += lam[i] * lam[i] * sigma_k_deleted(lam, k - 1, i);
        const double rhs = sigma_k(lam, 1) * sigma_k(lam, k) - (k + 1) * sigma_k(lam, k + 1);
        EXPECT_LE(std::abs(s4 - rhs), 1e-10 * sigma_k(mag, 1) * sigma_k(mag, k) * 2.0);
      }
    }
  }
}

TEST(GammaK, Examples) {
  auto g = in_gamma_k(Vec{1, 1, 1}, 3);
  EXPECT_TRUE(g.inside);
  EXPECT_DOUBLE_EQ(g.margin, 1.0);
  EXPECT_TRUE(in_gamma_k(Vec{-1, 5, 5}, 1).inside);
  EXPECT_TRUE(in_gamma_k(Vec{-1, 5, 5}, 2).inside);
  EXPECT_DOUBLE_EQ(in_gamma_k(Vec{-1, 5, 5}, 2).margin, 9.0);
  EXPECT_FALSE(in_gamma_k(Vec{-1, 5, 5}, 3).inside);
  g = in_gamma_k(Vec{0, 1, 1}, 2);
  EXPECT_TRUE(g.inside);
  EXPECT_DOUBLE_EQ(g.margin, 1.0);
  EXPECT_FALSE(in_gamma_k(Vec{0, 1, 1}, 3).inside);
  EXPECT_THROW(in_gamma_k(Vec{1, 1}, 0), PreconditionError);
}

TEST(GammaK, ConesAreNested) {
  std::mt19937_64 rng(2);
  for (int s = 0; s < 3000; ++s) {
    const int n = 2 + s % 6;
    Vec lam = random_vector(rng, n);
    for (auto& x : lam) x += 0.7;
    for (int k = 2; k <= n; ++k) {
      if (in_gamma_k(lam, k).inside) EXPECT_TRUE(in_gamma_k(lam, k - 1).inside);
    }
  }
}

TEST(NewtonMaclaurin, Examples) {
  EXPECT_NEAR(newton_maclaurin_gap(Vec{2, 2, 2, 2}, 1, 3), 0.0, 1e-15);
  EXPECT_NEAR(newton_maclaurin_gap(Vec{1, 2, 3}, 1, 2), 2.0 - std::sqrt(11.0 / 3.0), 1e-15);
  EXPECT_NEAR(newton_maclaurin_gap(Vec{1, 2, 3}, 1, 2), 0.0851, 1e-4);
  EXPECT_THROW(newton_maclaurin_gap(Vec{1, 2, 3}, 3, 2), PreconditionError);
  EXPECT_THROW(newton_maclaurin_gap(Vec{-5, 1, 1}, 1, 2), PreconditionError);
}

TEST(NewtonMaclaurin, NonNegativeOnCone) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> d(0.0, 1.0);
  int accepted = 0;
  while (accepted < 2000) {
    const int n = 2 + accepted % 6;
    const int k = 1 + accepted % n;
    Vec lam(static_cast<std::size_t>(n));
    for (auto& x : lam) x = std::abs(d(rng)) + 0.5 * d(rng);
    if (!in_gamma_k(lam, k).inside) continue;
    ++accepted;
    for (int l = 1; l <= k; ++l) EXPECT_GE(newton_maclaurin_gap(lam, l, k), -1e-12);
  }
}

TEST(MatrixForms, AgreeWithEigenvalues) {
  std::mt19937_64 rng(4);
  for (int s = 0; s < 100; ++s) {
    const int n = 1 + s % 4;
    const Eigen::MatrixXd b = random_symmetric(rng, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
    const Vec lam(es.eigenvalues().data(), es.eigenvalues().data() + n);
    for (int k = 0; k <= n; ++k) {
      EXPECT_NEAR(sigma_k_matrix(b, k), sigma_k(lam, k), 1e-12);
      // d sigma_k(b)/d b_ij by central differences of a symmetric perturbation
      if (k == 0) continue;
      const Eigen::MatrixXd g = sigma_k_matrix_grad(b, k);
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
          e(i, j) = e(j, i) = 1.0;
          const double fd = (sigma_k_matrix(b + 1e-6 * e, k) - sigma_k_matrix(b - 1e-6 * e, k)) / 2e-6;
          const double an = i == j ? g(i, i) : 2.0 * g(i, j);
          EXPECT_NEAR(an, fd, 1e-6 * std::max(1.0, std::abs(fd)));
        }
      }
    }
  }
}

TEST(MatrixForms, SecondVariation) {
  std::mt19937_64 rng(9);
  for (int s = 0; s < 60; ++s) {
    const int n = 2 + s % 3;
    const int k = 1 + s % n;
    const Eigen::MatrixXd b = random_symmetric(rng, n);
    const Eigen::MatrixXd dir = random_symmetric(rng, n);
    const double h = 1e-4;
    const double fd = (sigma_k_matrix(b + h * dir, k) - 2.0 * sigma_k_matrix(b, k) + sigma_k_matrix(b - h * dir, k)) / (h * h);
    EXPECT_NEAR(sigma_k_second_variation(b, dir, k), fd, 1e-5 * std::max(1.0, std::abs(fd)));
  }
  // repeated eigenvalue path
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd dir = Eigen::MatrixXd::Zero(3, 3);
  dir(0, 1) = dir(1, 0) = 1.0;
  // sigma_2(I + t E) = 3 - t^2, second variation -2
  EXPECT_NEAR(sigma_k_second_variation(id, dir, 2), -2.0, 1e-12);
}

TEST(Binom, Values) {
  EXPECT_EQ(binom(2, 1), 2.0);
  EXPECT_EQ(binom(5, 2), 10.0);
  EXPECT_EQ(binom(3, 0), 1.0);
  EXPECT_EQ(binom(3, 4), 0.0);
}
