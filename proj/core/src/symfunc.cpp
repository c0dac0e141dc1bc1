#include "cmk/symfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cmk/error.hpp"

namespace cmk {

namespace {

void check_order(std::size_t n, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > n) {
    throw PreconditionError("sigma_k order " + std::to_string(k) + " out of range for n = " + std::to_string(n));
  }
}

// sigma_k of lambda with the entries at `skip_a` / `skip_b` removed.
double sigma_skipping(std::span<const double> lambda, int k, std::size_t skip_a, std::size_t skip_b) {
  if (k < 0) return 0.0;
  std::vector<double> e(static_cast<std::size_t>(k) + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (i == skip_a || i == skip_b) continue;
    for (int j = k; j >= 1; --j) e[static_cast<std::size_t>(j)] += lambda[i] * e[static_cast<std::size_t>(j - 1)];
  }
  return e[static_cast<std::size_t>(k)];
}

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

}  // namespace

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

std::vector<double> elementary_symmetric_all(std::span<const double> lambda) {
  std::vector<double> e(lambda.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    for (std::size_t j = i + 1; j >= 1; --j) e[j] += lambda[i] * e[j - 1];
  }
  return e;
}

double sigma_k(std::span<const double> lambda, int k) {
  check_order(lambda.size(), k);
  return sigma_skipping(lambda, k, kNone, kNone);
}

double sigma_k_deleted(std::span<const double> lambda, int k, std::size_t i) {
  if (k < 0) return 0.0;
  return sigma_skipping(lambda, k, i, kNone);
}

double sigma_k_deleted2(std::span<const double> lambda, int k, std::size_t i, std::size_t j) {
  if (k < 0) return 0.0;
  return sigma_skipping(lambda, k, i, j);
}

SymDerivatives sigma_k_derivs(std::span<const double> lambda, int k) {
  check_order(lambda.size(), k);
  const std::size_t n = lambda.size();
  SymDerivatives d;
  d.value = sigma_k(lambda, k);
  d.grad.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.grad[i] = sigma_k_deleted(lambda, k - 1, i);
  d.matrix_grad = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) d.matrix_grad(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d.grad[i];
  return d;
}

Eigen::MatrixXd sigma_k_hessian(std::span<const double> lambda, int k) {
  check_order(lambda.size(), k);
  const auto n = static_cast<Eigen::Index>(lambda.size());
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) {
        hess(i, j) = sigma_k_deleted2(lambda, k - 2, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
    }
  }
  return hess;
}

GammaMembership in_gamma_k(std::span<const double> lambda, int k) {
  check_order(lambda.size(), k);
  if (k < 1) throw PreconditionError("Gamma_k requires k >= 1");
  const auto e = elementary_symmetric_all(lambda);
  GammaMembership g;
  g.margin = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= k; ++i) g.margin = std::min(g.margin, e[static_cast<std::size_t>(i)]);
  g.inside = g.margin > 0.0;
  return g;
}

double newton_maclaurin_gap(std::span<const double> lambda, int l, int k) {
  const int n = static_cast<int>(lambda.size());
  if (l < 1 || l > k || k > n) {
    throw PreconditionError("Newton-Maclaurin gap needs 1 <= l <= k <= n");
  }
  if (!in_gamma_k(lambda, k).inside) throw PreconditionError("Newton-Maclaurin gap needs lambda in Gamma_k");
  const auto e = elementary_symmetric_all(lambda);
  const double lower = std::pow(e[static_cast<std::size_t>(l)] / binom(n, l), 1.0 / l);
  const double upper = std::pow(e[static_cast<std::size_t>(k)] / binom(n, k), 1.0 / k);
  return lower - upper;
}

double sigma_k_matrix(const Eigen::MatrixXd& b, int k) {
  check_order(static_cast<std::size_t>(b.rows()), k);
  if (b.rows() == 1) return k == 0 ? 1.0 : b(0, 0);
  if (b.rows() == 2) {
    if (k == 0) return 1.0;
    if (k == 1) return b(0, 0) + b(1, 1);
    return b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd lam = es.eigenvalues();
  return sigma_k(std::span<const double>(lam.data(), static_cast<std::size_t>(lam.size())), k);
}

Eigen::MatrixXd sigma_k_matrix_grad(const Eigen::MatrixXd& b, int k) {
  const auto n = b.rows();
  check_order(static_cast<std::size_t>(n), k);
  if (k == 0) return Eigen::MatrixXd::Zero(n, n);
  if (n == 1) return Eigen::MatrixXd::Ones(1, 1);
  if (n == 2) {
    if (k == 1) return Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd c(2, 2);
    c << b(1, 1), -b(0, 1), -b(1, 0), b(0, 0);
    return c;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  const Eigen::VectorXd lam = es.eigenvalues();
  const auto d = sigma_k_derivs(std::span<const double>(lam.data(), static_cast<std::size_t>(n)), k);
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) g[i] = d.grad[static_cast<std::size_t>(i)];
  return es.eigenvectors() * g.asDiagonal() * es.eigenvectors().transpose();
}

double sigma_k_second_variation(const Eigen::MatrixXd& b, const Eigen::MatrixXd& direction, int k) {
  const auto n = b.rows();
  check_order(static_cast<std::size_t>(n), k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  const Eigen::VectorXd lam = es.eigenvalues();
  const Eigen::MatrixXd& q = es.eigenvectors();
  const Eigen::MatrixXd ht = q.transpose() * direction * q;
  const std::span<const double> ls(lam.data(), static_cast<std::size_t>(n));
  const auto d = sigma_k_derivs(ls, k);
  const Eigen::MatrixXd hess = sigma_k_hessian(ls, k);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      total += hess(i, j) * ht(i, i) * ht(j, j);
      if (i == j) continue;
      double divided;
      if (std::abs(lam[i] - lam[j]) < 1e-9 * (1.0 + std::abs(lam[i]))) {
        divided = hess(i, i) - hess(i, j);
      } else {
        divided = (d.grad[static_cast<std::size_t>(i)] - d.grad[static_cast<std::size_t>(j)]) / (lam[i] - lam[j]);
      }
      total += divided * ht(i, j) * ht(i, j);
    }
  }
  return total;
}

}  // namespace cmk
