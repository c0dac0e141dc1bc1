#include "cmk/geometry.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "cmk/error.hpp"
#include "cmk/grid_io.hpp"
#include "cmk/sphere_calculus.hpp"

namespace cmk {

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double parse_number(const std::string& tok, const std::string& where) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) throw IoError(where + ": bad number '" + tok + "'");
  return v;
}

// Minimizes H(x_i + w) / <x_i + w, u> over tangent w, with H the 1-homogeneous
// extension of h replaced by its second-order model h_i + g.w + w.B.w / 2
// (B = b(h) at the node). Returns the minimum and |w| at the minimizer.
std::pair<double, double> local_model_min(const SphereGrid& g, const HessianField& hf, const GridFunction& h,
                                          std::size_t i, const Vec3& u) {
  const NodeHessian& nh = hf.nodes[i];
  const int d = g.dim();
  Eigen::Matrix2d bm = Eigen::Matrix2d::Identity();
  Eigen::Vector2d gr = Eigen::Vector2d::Zero(), ut = Eigen::Vector2d::Zero();
  bm(0, 0) = nh.b11;
  if (d == 2) {
    bm(0, 1) = bm(1, 0) = nh.b12;
    bm(1, 1) = nh.b22;
  }
  for (int a = 0; a < d; ++a) {
    gr[a] = nh.grad[static_cast<std::size_t>(a)];
    ut[a] = dot(u, g.frame(i, a));
  }
  const Eigen::Matrix2d binv = bm.inverse();
  const double c = dot(u, g.coord(i));
  const double aa = ut.dot(binv * ut), bg = ut.dot(binv * gr), gg = gr.dot(binv * gr);
  const double lin = c - bg, cst = h[i] - 0.5 * gg;
  double rho = 0.0;
  if (aa > 1e-14 * std::abs(lin)) {
    const double disc = lin * lin + 2.0 * aa * cst;
    if (!(disc >= 0.0)) return {std::numeric_limits<double>::infinity(), 0.0};
    rho = 2.0 * cst / (lin + std::sqrt(disc));
  } else {
    rho = cst / lin;
  }
  const Eigen::Vector2d w = binv * (rho * ut - gr);
  return {rho, w.norm()};
}

// Expands around the sampled minimizer and its neighbours and keeps the
// expansion whose minimizer lies closest to its base node.
double refine(const SphereGrid& g, const HessianField& hf, const GridFunction& h, const Vec3& u, std::size_t best,
              double sampled) {
  const double cos_r = std::cos(1.5 * g.spacing());
  double out = sampled, best_w = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (dot(g.coord(i), g.coord(best)) < cos_r || !(dot(g.coord(i), u) > 0.0)) continue;
    const auto [rho, wn] = local_model_min(g, hf, h, i, u);
    if (std::isfinite(rho) && rho > 0.0 && wn < best_w) {
      best_w = wn;
      out = rho;
    }
  }
  return out;
}

}  // namespace

Vec3 BodyMesh::centroid() const {
  Vec3 c{0.0, 0.0, 0.0};
  for (const auto& v : vertices) {
    for (int a = 0; a < 3; ++a) c[static_cast<std::size_t>(a)] += v[static_cast<std::size_t>(a)];
  }
  const double n = vertices.empty() ? 1.0 : static_cast<double>(vertices.size());
  for (double& x : c) x /= n;
  return c;
}

BodyMesh reconstruct_body(const GridFunction& h) {
  if (!(h.min() > 0.0)) throw PreconditionError("reconstruct_body: h must be positive");
  const SphereGrid& g = h.grid();
  const HessianField hf = hessian_field(h);
  BodyMesh mesh;
  mesh.dim = g.dim();
  mesh.vertices.resize(g.size());
  mesh.normals = g.coords();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3& x = g.coord(i);
    Vec3 v{h[i] * x[0], h[i] * x[1], h[i] * x[2]};
    for (int axis = 0; axis < g.dim(); ++axis) {
      const Vec3 e = g.frame(i, axis);
      const double gi = hf.nodes[i].grad[static_cast<std::size_t>(axis)];
      for (int c = 0; c < 3; ++c) v[static_cast<std::size_t>(c)] += gi * e[static_cast<std::size_t>(c)];
    }
    mesh.vertices[i] = v;
  }
  if (antipodal_defect(h) == 0.0) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::size_t a = g.antipode(i);
      if (i < a) mesh.vertices[a] = {-mesh.vertices[i][0], -mesh.vertices[i][1], -mesh.vertices[i][2]};
    }
  }
  if (hf.min_eigenvalue() <= 0.0) {
    std::ostringstream os;
    os << "b(h) is not positive definite (min eigenvalue " << hf.min_eigenvalue() << "); mesh may be degenerate";
    mesh.warning = os.str();
  }

  if (g.dim() == 1) {
    for (std::size_t i = 0; i < g.size(); ++i) mesh.segments.push_back({i, (i + 1) % g.size()});
    return mesh;
  }
  const int ml = g.resolution().m_lat, mo = g.resolution().m_lon;
  for (int j = 0; j + 1 < ml; ++j) {
    for (int l = 0; l < mo; ++l) {
      const std::size_t a = g.index(j, l), b = g.index(j, l + 1);
      const std::size_t c = g.index(j + 1, l + 1), d = g.index(j + 1, l);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  for (int l = 1; l + 1 < mo; ++l) {
    mesh.triangles.push_back({g.index(0, 0), g.index(0, l + 1), g.index(0, l)});
    mesh.triangles.push_back({g.index(ml - 1, 0), g.index(ml - 1, l), g.index(ml - 1, l + 1)});
  }
  return mesh;
}

std::vector<double> radial_function(const GridFunction& h, const std::vector<Vec3>& directions) {
  if (!(h.min() > 0.0)) throw PreconditionError("radial_function: h must be positive");
  const SphereGrid& g = h.grid();
  const HessianField hf = hessian_field(h);
  if (!(hf.min_eigenvalue() > 0.0)) {
    std::size_t worst = 0;
    for (std::size_t i = 0; i < hf.size(); ++i) {
      if (hf.nodes[i].eig[0] < hf.nodes[worst].eig[0]) worst = i;
    }
    throw AdmissibilityError("radial_function: h is not strictly convex", worst, hf.min_eigenvalue());
  }
  std::vector<double> out;
  out.reserve(directions.size());
  for (const Vec3& u : directions) {
    const double nu = std::sqrt(dot(u, u));
    if (!(nu > 0.0)) throw PreconditionError("radial_function: zero direction");
    std::size_t best = g.size();
    double best_val = std::numeric_limits<double>::infinity();
    const Vec3 un{u[0] / nu, u[1] / nu, u[2] / nu};
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double c = dot(g.coord(i), un);
      if (c > 0.0 && h[i] / c < best_val) {
        best_val = h[i] / c;
        best = i;
      }
    }
    out.push_back(refine(g, hf, h, un, best, best_val));
  }
  return out;
}

void write_obj(std::ostream& os, const BodyMesh& mesh) {
  if (mesh.dim != 2) throw PreconditionError("OBJ export needs an S^2 mesh");
  for (const auto& v : mesh.vertices) {
    os << "v " << format_double(v[0]) << ' ' << format_double(v[1]) << ' ' << format_double(v[2]) << '\n';
  }
  for (const auto& n : mesh.normals) {
    os << "vn " << format_double(n[0]) << ' ' << format_double(n[1]) << ' ' << format_double(n[2]) << '\n';
  }
  for (const auto& t : mesh.triangles) {
    os << 'f';
    for (std::size_t idx : t) os << ' ' << idx + 1 << "//" << idx + 1;
    os << '\n';
  }
  if (!os) throw IoError("OBJ write failed");
}

void write_obj(const std::string& path, const BodyMesh& mesh) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_obj(os, mesh);
}

BodyMesh read_obj(std::istream& is, const std::string& source) {
  BodyMesh mesh;
  mesh.dim = 2;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v" || tag == "vn") {
      Vec3 v{};
      for (double& c : v) {
        std::string tok;
        if (!(ls >> tok)) throw IoError(where + ": expected three coordinates");
        c = parse_number(tok, where);
      }
      (tag == "v" ? mesh.vertices : mesh.normals).push_back(v);
    } else if (tag == "f") {
      std::vector<std::size_t> idx;
      std::string tok;
      while (ls >> tok) {
        const std::string head = tok.substr(0, tok.find('/'));
        const double raw = parse_number(head, where);
        if (raw < 1.0 || raw != std::floor(raw)) throw IoError(where + ": bad vertex index '" + head + "'");
        idx.push_back(static_cast<std::size_t>(raw) - 1);
      }
      if (idx.size() < 3) throw IoError(where + ": face needs at least three vertices");
      for (std::size_t i = 1; i + 1 < idx.size(); ++i) mesh.triangles.push_back({idx[0], idx[i], idx[i + 1]});
    }
  }
  for (const auto& t : mesh.triangles) {
    for (std::size_t i : t) {
      if (i >= mesh.vertices.size()) throw IoError(source + ": face index out of range");
    }
  }
  return mesh;
}

BodyMesh read_obj(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  return read_obj(is, path);
}

void write_polyline_csv(std::ostream& os, const BodyMesh& mesh) {
  if (mesh.dim != 1) throw PreconditionError("polyline export needs an S^1 mesh");
  os << "x,y\n";
  for (const auto& v : mesh.vertices) os << format_double(v[0]) << ',' << format_double(v[1]) << '\n';
  if (!os) throw IoError("polyline write failed");
}

void write_polyline_csv(const std::string& path, const BodyMesh& mesh) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_polyline_csv(os, mesh);
}

double enclosed_measure(const BodyMesh& mesh) {
  double total = 0.0;
  if (mesh.dim == 1) {
    for (const auto& s : mesh.segments) {
      const Vec3& a = mesh.vertices[s[0]];
      const Vec3& b = mesh.vertices[s[1]];
      total += 0.5 * (a[0] * b[1] - a[1] * b[0]);
    }
    return total;
  }
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    total += (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])) / 6.0;
  }
  return total;
}

}  // namespace cmk
