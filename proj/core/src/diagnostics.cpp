#include "cmk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cmk/error.hpp"
#include "cmk/symfunc.hpp"

namespace cmk {

namespace {

bool is_constant_one(const GridFunction& f) { return (f.values().array() - 1.0).abs().maxCoeff() <= 1e-14; }

double node_grad2(const NodeHessian& nh, int dim) {
  return dim == 1 ? nh.grad[0] * nh.grad[0] : nh.grad[0] * nh.grad[0] + nh.grad[1] * nh.grad[1];
}

}  // namespace

DiagnosticsReport run_diagnostics(const ProblemSpec& spec, const GridFunction& h) {
  if (!(h.min() > 0.0)) throw PreconditionError("run_diagnostics: h must be positive");
  const int dim = h.grid().dim();
  const HessianField hf = hessian_field(h);
  DiagnosticsReport rep;
  rep.R = h.max();
  rep.r = h.min();
  rep.ratio = rep.R / rep.r;
  rep.min_b_eig = hf.min_eigenvalue();
  rep.c2_quantity = -std::numeric_limits<double>::infinity();
  for (const auto& nh : hf.nodes) rep.c2_quantity = std::max(rep.c2_quantity, nh.trace(dim));

  if (spec.p > 1.0) {
    const double gamma = (spec.p - 1.0) / spec.k;
    double zmax = 0.0;
    for (std::size_t i = 0; i < hf.size(); ++i) {
      const double rho2 = h[i] * h[i] + node_grad2(hf.nodes[i], dim);
      zmax = std::max(zmax, rho2 / std::pow(h[i], gamma));
    }
    rep.gamma_used = gamma;
    rep.zeta_max = zmax;
    rep.zeta_bound_ratio = zmax / std::pow(rep.R, 2.0 - gamma);
  } else {
    rep.notes.emplace_back("p <= 1: the gradient-estimate exponent interval is empty; zeta fields omitted");
  }

  if (spec.homotopy_exponent() > 0.0) {
    rep.f1_satisfied = validate_f1(spec).satisfied;
    if (!rep.f1_satisfied) rep.notes.emplace_back("data violate (f1); full rank is not guaranteed");
  } else {
    rep.notes.emplace_back("k + p - 1 <= 0: (f1) undefined");
  }
  if (rep.min_b_eig <= 0.0) rep.notes.emplace_back("b(h) is not positive definite somewhere");
  return rep;
}

AfCheck af_inequality_check(const GridFunction& h, int k, const GridFunction& testfn, double equality_tol) {
  if (h.grid_ptr() != testfn.grid_ptr()) throw PreconditionError("af_inequality_check: grids differ");
  const int dim = h.grid().dim();
  if (k < 1 || k > dim) throw PreconditionError("af_inequality_check: k out of range");
  const HessianField hf = hessian_field(h);
  const AdmissibilityReport adm = admissibility(hf, k);
  if (!adm.admissible()) {
    std::ostringstream os;
    os << "af_inequality_check: b(h) leaves Gamma_" << k << " at node " << adm.worst_node;
    throw AdmissibilityError(os.str(), adm.worst_node, adm.margin);
  }
  const std::size_t n = h.size();
  Eigen::VectorXd sig(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) sig[static_cast<Eigen::Index>(i)] = node_sigma(hf.nodes[i], dim, k);

  const Eigen::VectorXd weight = h.values().cwiseProduct(sig);
  const double mass = integrate(h.with_values(weight));
  const double mean = integrate(h.with_values(testfn.values().cwiseProduct(weight))) / mass;
  const GridFunction f = testfn.with_values(testfn.values().array() - mean);
  const GradientField df = grad(f);

  Eigen::VectorXd lhs_density(static_cast<Eigen::Index>(n)), rhs_density(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    const NodeHessian& nh = hf.nodes[i];
    double quad;
    if (dim == 1) {
      quad = df.components[i][0] * df.components[i][0];
    } else {
      Eigen::Matrix2d b;
      b << nh.b11, nh.b12, nh.b12, nh.b22;
      const Eigen::MatrixXd s = sigma_k_matrix_grad(b, k);
      const Eigen::Vector2d g(df.components[i][0], df.components[i][1]);
      quad = g.dot(s * g);
    }
    lhs_density[e] = k * f[i] * f[i] * weight[e];
    rhs_density[e] = h[i] * h[i] * quad;
  }
  AfCheck out;
  out.subtracted_mean = mean;
  out.lhs = integrate(h.with_values(lhs_density));
  out.rhs = integrate(h.with_values(rhs_density));
  out.slack = out.rhs - out.lhs;
  out.equality_case = std::abs(out.slack) <= equality_tol * std::max(1.0, out.rhs);
  return out;
}

LinearFamilyFit fit_linear_family(const GridFunction& h, const GridFunction& f) {
  const SphereGrid& g = h.grid();
  const int cols = g.dim() + 1;
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd a(n, cols);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const double sw = std::sqrt(g.weights()[u]);
    for (int c = 0; c < cols; ++c) a(i, c) = sw * g.coord(u)[static_cast<std::size_t>(c)] / h[u];
    rhs[i] = sw * f[u];
  }
  const Eigen::VectorXd v = a.colPivHouseholderQr().solve(rhs);
  LinearFamilyFit fit;
  for (int c = 0; c < cols; ++c) fit.v[static_cast<std::size_t>(c)] = v[c];
  const double denom = rhs.norm();
  fit.relative_residual = denom > 0.0 ? (a * v - rhs).norm() / denom : 0.0;
  return fit;
}

double l0_analytic_eigenvalue(int n, int k, double p, double q, int degree) {
  return binom(n - 1, k - 1) * (n * (q - p) / k - degree * (degree + n - 1.0));
}

Spectrum l0_spectrum(const ProblemSpec& spec) {
  const GridPtr& grid = spec.grid();
  const SparseRowMatrix jac = assemble_jacobian_sparse(spec, GridFunction::constant(grid, 1.0), 0.0);
  const auto& anti = grid->antipodes();
  std::vector<std::size_t> rep;
  std::vector<Eigen::Index> pair_of(grid->size());
  for (std::size_t i = 0; i < anti.size(); ++i) {
    if (i < anti[i]) {
      pair_of[i] = static_cast<Eigen::Index>(rep.size());
      pair_of[anti[i]] = static_cast<Eigen::Index>(rep.size());
      rep.push_back(i);
    }
  }
  const auto m = static_cast<Eigen::Index>(rep.size());
  // (P^T J P) / 2 with P the antipodal-pair indicator basis
  Eigen::MatrixXd even = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index row = 0; row < jac.outerSize(); ++row) {
    const Eigen::Index pr = pair_of[static_cast<std::size_t>(row)];
    for (SparseRowMatrix::InnerIterator it(jac, row); it; ++it) {
      even(pr, pair_of[static_cast<std::size_t>(it.col())]) += 0.5 * it.value();
    }
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(even, false);
  Spectrum s;
  s.eigenvalues.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    s.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()[i].real();
    s.max_imag = std::max(s.max_imag, std::abs(es.eigenvalues()[i].imag()));
  }
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
  return s;
}

GridFunction manufacture(const GridFunction& h_star, int k, double p, double q) {
  if (!(h_star.min() > 0.0)) throw PreconditionError("manufacture: h* must be positive");
  if (antipodal_defect(h_star) > 1e-12 * std::max(1.0, h_star.max())) {
    throw PreconditionError("manufacture: h* must be even");
  }
  const int dim = h_star.grid().dim();
  if (k < 1 || k > dim) throw PreconditionError("manufacture: k out of range");
  const HessianField hf = hessian_field(h_star);
  const AdmissibilityReport adm = admissibility(hf, k);
  if (!adm.admissible()) {
    std::ostringstream os;
    os << "manufacture: b(h*) leaves Gamma_" << k << " at node " << adm.worst_node;
    throw AdmissibilityError(os.str(), adm.worst_node, adm.margin);
  }
  const double a = k + 1.0 - q;
  Eigen::VectorXd f(h_star.values().size());
  for (std::size_t i = 0; i < hf.size(); ++i) {
    const double hv = h_star[i];
    const double rho2 = hv * hv + node_grad2(hf.nodes[i], dim);
    f[static_cast<Eigen::Index>(i)] = node_sigma(hf.nodes[i], dim, k) / (std::pow(hv, p - 1.0) * std::pow(rho2, 0.5 * a));
  }
  return h_star.with_values(std::move(f));
}

IsotropicWindow isotropic_window(int n, int k, double p, double q) {
  IsotropicWindow w;
  w.q_bound = k + 1.0 + 2.0 * k - 2.0 * n - 2.0 +
              2.0 * std::sqrt((n - k + 1.0) * (n - k + 1.0) + (k + p - 1.0) / (n + 2.0));
  if (n < 2 || k >= n) {
    w.note = "uniqueness window stated for n >= 2 and 1 <= k < n only";
    w.holds = false;
    return w;
  }
  const bool p_ok = p >= 1.0 - k;
  const bool q_ok = q <= w.q_bound;
  const bool strict = p > 1.0 - k || q < w.q_bound;
  w.holds = p_ok && q_ok && strict;
  if (!w.holds) w.note = "parameters outside the uniqueness window";
  return w;
}

double isotropic_radius(int n, int k, double p, double q) {
  if (q == p) throw UnsupportedParameterError("isotropic radius undefined for q == p");
  return std::pow(binom(n, k), -1.0 / (q - p));
}

IsotropicReport isotropic_experiment(const ProblemSpec& spec) {
  if (!is_constant_one(spec.f)) throw PreconditionError("isotropic_experiment: requires f = 1");
  const double r_star = isotropic_radius(spec.n, spec.k, spec.p, spec.q);
  ContinuationResult cr = continue_path(spec);
  const double err = (cr.h.values().array() - r_star).abs().maxCoeff() / r_star;
  return {cr.h, r_star, err, cr.success, isotropic_window(spec.n, spec.k, spec.p, spec.q), cr.trace, cr.failure};
}

GridFunction random_even_field(const GridPtr& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = grid->dim() + 1;
  Eigen::MatrixXd a(d, d), b(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      a(i, j) = normal(rng);
      b(i, j) = normal(rng);
    }
  }
  a = 0.5 * (a + a.transpose());
  b = 0.5 * (b + b.transpose());
  const double quartic_weight = 0.5 * normal(rng);
  GridFunction delta = GridFunction::sample(grid, [&](const Vec3& x) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = x[static_cast<std::size_t>(i)];
    const double qa = v.dot(a * v);
    const double qb = v.dot(b * v);
    return qa - a.trace() / d + quartic_weight * (qb * qb);
  });
  Eigen::VectorXd vals = delta.values().array() - delta.values().mean();
  vals /= vals.cwiseAbs().maxCoeff();
  return even_project(delta.with_values(std::move(vals)));
}

IsotropicReport isotropic_restart(const ProblemSpec& spec, std::uint64_t seed, double amplitude) {
  if (!is_constant_one(spec.f)) throw PreconditionError("isotropic_restart: requires f = 1");
  const double r_star = isotropic_radius(spec.n, spec.k, spec.p, spec.q);
  const GridFunction delta = random_even_field(spec.grid(), seed);
  const GridFunction h0 = even_project(delta.with_values(r_star * (1.0 + amplitude * delta.values().array())));
  IsotropicReport rep{h0, r_star, 0.0, false, isotropic_window(spec.n, spec.k, spec.p, spec.q), {}, {}};
  NewtonResult nr = newton_solve(spec, h0, 1.0);
  rep.h_final = nr.h;
  rep.converged = nr.converged;
  rep.failure = nr.diagnostic;
  rep.sphere_radius_error = (nr.h.values().array() - r_star).abs().maxCoeff() / r_star;
  rep.trace.steps.push_back(summarize_step(1.0, nr.iterations, nr.final_linf, nr.h));
  return rep;
}

}  // namespace cmk
