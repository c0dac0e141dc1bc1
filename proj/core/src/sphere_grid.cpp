#include "cmk/sphere_grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cmk/error.hpp"

namespace cmk {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes (ascending) and weights on [-1, 1], Newton on P_m.
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(m), 0.0);
  weights.assign(static_cast<std::size_t>(m), 0.0);
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = m * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) {
        // one more evaluation for a consistent derivative
        p0 = 1.0;
        p1 = 0.0;
        for (int j = 1; j <= m; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = m * (z * p0 - p1) / (z * z - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // mirror so that nodes[m-1-i] == -nodes[i] exactly
    nodes[static_cast<std::size_t>(m - 1 - i)] = z;
    nodes[static_cast<std::size_t>(i)] = -z;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(m - 1 - i)] = w;
  }
  if (m % 2 == 1) nodes[static_cast<std::size_t>(m / 2)] = 0.0;
}

// Periodic spectral differentiation on m equispaced points (m even).
void periodic_spectral(int m, Eigen::MatrixXd& d1, Eigen::MatrixXd& d2) {
  const double h = 2.0 * kPi / m;
  d1 = Eigen::MatrixXd::Zero(m, m);
  d2 = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    double row1 = 0.0, row2 = 0.0;
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const int k = i - j;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      const double half = 0.5 * k * h;
      d1(i, j) = 0.5 * sign / std::tan(half);
      const double s = std::sin(half);
      d2(i, j) = -0.5 * sign / (s * s);
      row1 += d1(i, j);
      row2 += d2(i, j);
    }
    d1(i, i) = -row1;
    d2(i, i) = -row2;
  }
}

// Trigonometric differentiation on arbitrary distinct points of the circle.
// Returns the rows of d/ds and d2/ds2 at every node; the Nyquist basis term
// (cos or sin of (N/2) s) is picked for the better conditioned system.
void trig_differentiation(const std::vector<double>& s, Eigen::MatrixXd& d1, Eigen::MatrixXd& d2) {
  const int nn = static_cast<int>(s.size());
  const int half = nn / 2;
  auto build = [&](bool nyquist_cos, Eigen::MatrixXd& v, Eigen::MatrixXd& v1, Eigen::MatrixXd& v2) {
    v.resize(nn, nn);
    v1.resize(nn, nn);
    v2.resize(nn, nn);
    for (int i = 0; i < nn; ++i) {
      int c = 0;
      v(i, c) = 1.0;
      v1(i, c) = 0.0;
      v2(i, c) = 0.0;
      ++c;
      for (int k = 1; k < half; ++k) {
        const double ck = std::cos(k * s[static_cast<std::size_t>(i)]);
        const double sk = std::sin(k * s[static_cast<std::size_t>(i)]);
        v(i, c) = ck;
        v1(i, c) = -k * sk;
        v2(i, c) = -k * k * ck;
        ++c;
        v(i, c) = sk;
        v1(i, c) = k * ck;
        v2(i, c) = -k * k * sk;
        ++c;
      }
      const double ch = std::cos(half * s[static_cast<std::size_t>(i)]);
      const double sh = std::sin(half * s[static_cast<std::size_t>(i)]);
      if (nyquist_cos) {
        v(i, c) = ch;
        v1(i, c) = -half * sh;
        v2(i, c) = -half * half * ch;
      } else {
        v(i, c) = sh;
        v1(i, c) = half * ch;
        v2(i, c) = -half * half * sh;
      }
    }
  };
  Eigen::MatrixXd va, va1, va2, vb, vb1, vb2;
  build(true, va, va1, va2);
  build(false, vb, vb1, vb2);
  Eigen::JacobiSVD<Eigen::MatrixXd> sa(va), sb(vb);
  const double cond_a = sa.singularValues()(0) / sa.singularValues()(nn - 1);
  const double cond_b = sb.singularValues()(0) / sb.singularValues()(nn - 1);
  const bool use_a = cond_a <= cond_b;
  const Eigen::MatrixXd& v = use_a ? va : vb;
  const Eigen::MatrixXd& v1 = use_a ? va1 : vb1;
  const Eigen::MatrixXd& v2 = use_a ? va2 : vb2;
  // D = V' V^{-1}  <=>  V^T D^T = V'^T
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(v.transpose());
  d1 = lu.solve(v1.transpose()).transpose();
  d2 = lu.solve(v2.transpose()).transpose();
  for (int i = 0; i < nn; ++i) {
    d1(i, i) = 0.0;
    d2(i, i) = 0.0;
    d1(i, i) = -d1.row(i).sum();
    d2(i, i) = -d2.row(i).sum();
  }
}

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseRowMatrix from_triplets(std::size_t n, const Triplets& t) {
  SparseRowMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

void check_resolution(const GridResolution& res) {
  if (res.n != 1 && res.n != 2) {
    throw PreconditionError("sphere dimension must be 1 or 2, got " + std::to_string(res.n));
  }
  if (res.n == 1) {
    if (res.m_theta < 8) throw PreconditionError("m_theta must be >= 8");
    if (res.m_theta % 2 != 0) {
      throw PreconditionError("m_theta must be even for antipodal closure, got " +
                              std::to_string(res.m_theta));
    }
  } else {
    if (res.m_lat < 8) throw PreconditionError("m_lat must be >= 8");
    if (res.m_lon < 8) throw PreconditionError("m_lon must be >= 8");
    if (res.m_lon % 2 != 0) {
      throw PreconditionError("m_lon must be even for antipodal closure, got " +
                              std::to_string(res.m_lon));
    }
  }
}

}  // namespace

double SphereGrid::lon_of_col(int l) const { return 2.0 * kPi * l / res_.m_lon; }

std::size_t SphereGrid::index(int j, int l) const {
  const int m = res_.m_lon;
  const int lw = ((l % m) + m) % m;
  return static_cast<std::size_t>(j) * static_cast<std::size_t>(m) + static_cast<std::size_t>(lw);
}

double SphereGrid::measure() const { return res_.n == 1 ? 2.0 * kPi : 4.0 * kPi; }

double SphereGrid::spacing() const {
  if (res_.n == 1) return 2.0 * kPi / res_.m_theta;
  return std::max(kPi / res_.m_lat, 2.0 * kPi / res_.m_lon);
}

Vec3 SphereGrid::frame(std::size_t node, int axis) const {
  if (res_.n == 1) {
    const Vec3& x = coords_[node];
    return {-x[1], x[0], 0.0};
  }
  const std::size_t l = static_cast<std::size_t>(col(node));
  const double cl = cos_lon_[l], sl = sin_lon_[l];
  if (axis == 0) {
    const double phi = lat(node);
    const double sp = std::sin(phi);
    return {-sp * cl, -sp * sl, std::cos(phi)};
  }
  return {-sl, cl, 0.0};
}

GridPtr build_grid(const GridResolution& res) {
  check_resolution(res);
  auto grid = std::shared_ptr<SphereGrid>(new SphereGrid());
  SphereGrid& g = *grid;
  g.res_ = res;

  if (res.n == 1) {
    const int m = res.m_theta;
    const int half = m / 2;
    g.coords_.resize(static_cast<std::size_t>(m));
    g.angle_.resize(static_cast<std::size_t>(m));
    g.weights_.assign(static_cast<std::size_t>(m), 2.0 * kPi / m);
    g.antipode_.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      g.angle_[static_cast<std::size_t>(i)] = 2.0 * kPi * i / m;
      g.antipode_[static_cast<std::size_t>(i)] = static_cast<std::size_t>((i + half) % m);
    }
    for (int i = 0; i < half; ++i) {
      const double th = g.angle_[static_cast<std::size_t>(i)];
      const double c = std::cos(th), s = std::sin(th);
      g.coords_[static_cast<std::size_t>(i)] = {c, s, 0.0};
      g.coords_[static_cast<std::size_t>(i + half)] = {-c, -s, 0.0};
    }
    Eigen::MatrixXd d1, d2;
    periodic_spectral(m, d1, d2);
    g.ops_.d_theta = d1.sparseView();
    g.ops_.d_theta2 = d2.sparseView();
    return grid;
  }

  const int ml = res.m_lat, mo = res.m_lon;
  const int half_lon = mo / 2;
  const std::size_t nodes = static_cast<std::size_t>(ml) * static_cast<std::size_t>(mo);

  std::vector<double> mu, wl;
  gauss_legendre(ml, mu, wl);
  g.lat_.resize(static_cast<std::size_t>(ml));
  for (int j = 0; j < ml; ++j) g.lat_[static_cast<std::size_t>(j)] = std::asin(mu[static_cast<std::size_t>(j)]);

  g.cos_lon_.resize(static_cast<std::size_t>(mo));
  g.sin_lon_.resize(static_cast<std::size_t>(mo));
  for (int l = 0; l < half_lon; ++l) {
    const double lam = g.lon_of_col(l);
    g.cos_lon_[static_cast<std::size_t>(l)] = std::cos(lam);
    g.sin_lon_[static_cast<std::size_t>(l)] = std::sin(lam);
    g.cos_lon_[static_cast<std::size_t>(l + half_lon)] = -std::cos(lam);
    g.sin_lon_[static_cast<std::size_t>(l + half_lon)] = -std::sin(lam);
  }

  g.coords_.resize(nodes);
  g.weights_.resize(nodes);
  g.antipode_.resize(nodes);
  g.sec_.resize(static_cast<Eigen::Index>(nodes));
  g.tan_.resize(static_cast<Eigen::Index>(nodes));
  const double dlon = 2.0 * kPi / mo;
  for (int j = 0; j < ml; ++j) {
    const double phi = g.lat_[static_cast<std::size_t>(j)];
    const double cp = std::cos(phi), sp = std::sin(phi);
    for (int l = 0; l < mo; ++l) {
      const std::size_t i = g.index(j, l);
      g.coords_[i] = {cp * g.cos_lon_[static_cast<std::size_t>(l)], cp * g.sin_lon_[static_cast<std::size_t>(l)], sp};
      g.weights_[i] = wl[static_cast<std::size_t>(j)] * dlon;
      g.antipode_[i] = g.index(ml - 1 - j, l + half_lon);
      g.sec_[static_cast<Eigen::Index>(i)] = 1.0 / cp;
      g.tan_[static_cast<Eigen::Index>(i)] = sp / cp;
    }
  }

  // longitude: block-diagonal periodic spectral matrices
  Eigen::MatrixXd c1, c2;
  periodic_spectral(mo, c1, c2);
  Triplets t1, t2;
  t1.reserve(nodes * static_cast<std::size_t>(mo));
  t2.reserve(nodes * static_cast<std::size_t>(mo));
  for (int j = 0; j < ml; ++j) {
    for (int l = 0; l < mo; ++l) {
      for (int c = 0; c < mo; ++c) {
        const auto r = static_cast<int>(g.index(j, l));
        const auto cc = static_cast<int>(g.index(j, c));
        if (c1(l, c) != 0.0) t1.emplace_back(r, cc, c1(l, c));
        t2.emplace_back(r, cc, c2(l, c));
      }
    }
  }
  g.ops_.d_lon = from_triplets(nodes, t1);
  g.ops_.d_lon2 = from_triplets(nodes, t2);

  // latitude: the meridian at column l continues through each pole onto
  // column l + m_lon/2. Along that great circle the arclength coordinate is
  // s = lat on the own meridian and s = pi - lat (north) or -pi - lat (south)
  // on the antipodal one.
  Triplets a1, a2;
  if (res.scheme == LatitudeScheme::kSecondOrder) {
    for (int j = 0; j < ml; ++j) {
      const double s0 = g.lat_[static_cast<std::size_t>(j)];
      for (int l = 0; l < mo; ++l) {
        std::size_t below, above;
        double sb, sa;
        if (j > 0) {
          below = g.index(j - 1, l);
          sb = g.lat_[static_cast<std::size_t>(j - 1)];
        } else {
          below = g.index(0, l + half_lon);
          sb = -kPi - g.lat_[0];
        }
        if (j < ml - 1) {
          above = g.index(j + 1, l);
          sa = g.lat_[static_cast<std::size_t>(j + 1)];
        } else {
          above = g.index(ml - 1, l + half_lon);
          sa = kPi - g.lat_[static_cast<std::size_t>(ml - 1)];
        }
        const double h1 = s0 - sb, h2 = sa - s0;
        const double wb1 = -h2 / (h1 * (h1 + h2));
        const double wa1 = h1 / (h2 * (h1 + h2));
        const double wb2 = 2.0 / (h1 * (h1 + h2));
        const double wa2 = 2.0 / (h2 * (h1 + h2));
        const auto r = static_cast<int>(g.index(j, l));
        a1.emplace_back(r, static_cast<int>(below), wb1);
        a1.emplace_back(r, static_cast<int>(above), wa1);
        a1.emplace_back(r, r, -(wb1 + wa1));
        a2.emplace_back(r, static_cast<int>(below), wb2);
        a2.emplace_back(r, static_cast<int>(above), wa2);
        a2.emplace_back(r, r, -(wb2 + wa2));
      }
    }
  } else {
    // extended circle: own column rows 0..ml-1, then antipodal column rows
    // ml-1 down to 0
    std::vector<double> s(static_cast<std::size_t>(2 * ml));
    for (int j = 0; j < ml; ++j) s[static_cast<std::size_t>(j)] = g.lat_[static_cast<std::size_t>(j)];
    for (int i = 0; i < ml; ++i) {
      s[static_cast<std::size_t>(ml + i)] = kPi - g.lat_[static_cast<std::size_t>(ml - 1 - i)];
    }
    Eigen::MatrixXd e1, e2;
    trig_differentiation(s, e1, e2);
    for (int j = 0; j < ml; ++j) {
      for (int l = 0; l < mo; ++l) {
        const auto r = static_cast<int>(g.index(j, l));
        for (int i = 0; i < 2 * ml; ++i) {
          const std::size_t c = i < ml ? g.index(i, l) : g.index(ml - 1 - (i - ml), l + half_lon);
          a1.emplace_back(r, static_cast<int>(c), e1(j, i));
          a2.emplace_back(r, static_cast<int>(c), e2(j, i));
        }
      }
    }
  }
  g.ops_.d_lat = from_triplets(nodes, a1);
  g.ops_.d_lat2 = from_triplets(nodes, a2);
  g.ops_.d_latlon = (g.ops_.d_lat * g.ops_.d_lon).pruned();
  g.ops_.d_latlon.makeCompressed();
  return grid;
}

GridFunction::GridFunction(GridPtr grid, Eigen::VectorXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw PreconditionError("GridFunction requires a grid");
  if (static_cast<std::size_t>(values_.size()) != grid_->size()) {
    throw PreconditionError("GridFunction has " + std::to_string(values_.size()) +
                            " values for " + std::to_string(grid_->size()) + " nodes");
  }
  if (!values_.allFinite()) throw PreconditionError("GridFunction values must be finite");
}

GridFunction GridFunction::constant(GridPtr grid, double c) {
  const auto n = static_cast<Eigen::Index>(grid->size());
  return {std::move(grid), Eigen::VectorXd::Constant(n, c)};
}

GridFunction GridFunction::sample(GridPtr grid, const std::function<double(const Vec3&)>& fn) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(grid->size()));
  for (std::size_t i = 0; i < grid->size(); ++i) v[static_cast<Eigen::Index>(i)] = fn(grid->coord(i));
  return {std::move(grid), std::move(v)};
}

std::vector<std::size_t> symmetry_permutation(const SphereGrid& grid, const GridSymmetry& s) {
  const std::size_t n = grid.size();
  std::vector<std::size_t> perm(n);
  if (s.kind == GridSymmetry::Kind::kAntipodal) return grid.antipodes();
  if (grid.dim() == 1) {
    const int m = grid.resolution().m_theta;
    for (std::size_t i = 0; i < n; ++i) {
      const int ii = static_cast<int>(i);
      const int mapped = s.kind == GridSymmetry::Kind::kLongitudeShift ? ii + s.steps : -ii;
      perm[i] = static_cast<std::size_t>(((mapped % m) + m) % m);
    }
    return perm;
  }
  const int ml = grid.resolution().m_lat;
  for (std::size_t i = 0; i < n; ++i) {
    const int j = grid.row(i), l = grid.col(i);
    perm[i] = s.kind == GridSymmetry::Kind::kLongitudeShift ? grid.index(j, l + s.steps)
                                                           : grid.index(ml - 1 - j, l);
  }
  return perm;
}

GridFunction apply_symmetry(const GridFunction& h, const GridSymmetry& s) {
  const auto perm = symmetry_permutation(h.grid(), s);
  Eigen::VectorXd out(h.values().size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[static_cast<Eigen::Index>(i)] = h[perm[i]];
  return h.with_values(std::move(out));
}

GridFunction even_project(const GridFunction& h) {
  const auto& anti = h.grid().antipodes();
  Eigen::VectorXd out = h.values();
  for (std::size_t i = 0; i < anti.size(); ++i) {
    const std::size_t a = anti[i];
    if (a < i) continue;
    const double avg = 0.5 * (h[i] + h[a]);
    out[static_cast<Eigen::Index>(i)] = avg;
    out[static_cast<Eigen::Index>(a)] = avg;
  }
  return h.with_values(std::move(out));
}

double antipodal_defect(const GridFunction& h) {
  const auto& anti = h.grid().antipodes();
  double d = 0.0;
  for (std::size_t i = 0; i < anti.size(); ++i) d = std::max(d, std::abs(h[i] - h[anti[i]]));
  return d;
}

double integrate(const GridFunction& g) {
  const auto& w = g.grid().weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * g[i];
  return sum;
}

double l2_norm(const GridFunction& g) {
  const auto& w = g.grid().weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * g[i] * g[i];
  return std::sqrt(sum);
}

}  // namespace cmk
