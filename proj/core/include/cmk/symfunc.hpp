#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cmk {

/// sigma_k and its first derivatives at an eigenvalue vector.
struct SymDerivatives {
  double value = 0.0;
  /// d sigma_k / d lambda_i = sigma_{k-1}(lambda | i)
  std::vector<double> grad;
  /// d sigma_k / d b_ij in the eigenframe of b: diag(grad).
  Eigen::MatrixXd matrix_grad;
};

struct GammaMembership {
  bool inside = false;
  /// min_{1 <= i <= k} sigma_i(lambda); may be <= 0.
  double margin = 0.0;
};

/// All elementary symmetric polynomials sigma_0..sigma_n of lambda, by
/// expanding prod_i (1 + lambda_i x) one factor at a time.
std::vector<double> elementary_symmetric_all(std::span<const double> lambda);

/// sigma_k(lambda); sigma_0 = 1. Throws PreconditionError unless 0 <= k <= n.
double sigma_k(std::span<const double> lambda, int k);

/// sigma_k(lambda | i): lambda_i deleted (k may equal n, giving 0).
double sigma_k_deleted(std::span<const double> lambda, int k, std::size_t i);

/// sigma_k(lambda | i, j) for i != j.
double sigma_k_deleted2(std::span<const double> lambda, int k, std::size_t i, std::size_t j);

SymDerivatives sigma_k_derivs(std::span<const double> lambda, int k);

/// d^2 sigma_k / d lambda_i d lambda_j: sigma_{k-2}(lambda | i, j) off the
/// diagonal, 0 on it.
Eigen::MatrixXd sigma_k_hessian(std::span<const double> lambda, int k);

GammaMembership in_gamma_k(std::span<const double> lambda, int k);

/// [sigma_l / C(n,l)]^{1/l} - [sigma_k / C(n,k)]^{1/k}. Requires lambda in
/// Gamma_k and 1 <= l <= k <= n.
double newton_maclaurin_gap(std::span<const double> lambda, int l, int k);

// Matrix forms for a symmetric b (any size).

/// sigma_k of the eigenvalues of b.
double sigma_k_matrix(const Eigen::MatrixXd& b, int k);

/// sigma_k^{ij} = d sigma_k / d b_ij in the coordinates of b. Closed forms
/// for sizes 1 and 2, eigen-decomposition otherwise.
Eigen::MatrixXd sigma_k_matrix_grad(const Eigen::MatrixXd& b, int k);

/// Second variation d^2/dt^2 sigma_k(b + t H) at t = 0, through the
/// eigen-decomposition and divided differences of the eigenvalue gradient.
/// Nearly equal eigenvalues fall back to the derivative limit.
double sigma_k_second_variation(const Eigen::MatrixXd& b, const Eigen::MatrixXd& direction, int k);

/// Binomial coefficient as a double.
double binom(int n, int k);

}  // namespace cmk
