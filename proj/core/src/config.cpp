#include "cmk/config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "cmk/error.hpp"
#include "cmk/grid_io.hpp"

namespace cmk {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Ctx {
  const std::string& source;
  int line;
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + msg, line);
  }
};

double to_double(const std::string& v, const Ctx& c) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) c.fail("expected a number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& v, const Ctx& c) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) c.fail("expected an integer, got '" + v + "'");
  return out;
}

std::vector<double> to_list(const std::string& v, const Ctx& c) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const std::string item = trim(v.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (item.empty()) c.fail("empty list entry in '" + v + "'");
    out.push_back(to_double(item, c));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Vec3 to_vec3(const std::string& v, const Ctx& c) {
  const auto list = to_list(v, c);
  if (list.size() != 3) c.fail("expected three comma-separated numbers");
  return {list[0], list[1], list[2]};
}

bool to_bool(const std::string& v, const Ctx& c) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  c.fail("expected true or false, got '" + v + "'");
}

int to_count(const std::string& v, const Ctx& c) {
  const long long x = to_int(v, c);
  if (x < 0 || x > 1'000'000) c.fail("count out of range: " + v);
  return static_cast<int>(x);
}

std::string resolve(const std::string& base, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base) / p).lexically_normal().string();
}

using Setter = std::function<void(RunConfig&, const std::string&, const Ctx&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"n", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) {
         r.n = static_cast<int>(to_int(v, c));
         if (r.n != 1 && r.n != 2) c.fail("n must be 1 or 2");
       }},
      {"k", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.k = static_cast<int>(to_int(v, c)); }},
      {"p", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.p = to_double(v, c); }},
      {"q", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.q = to_double(v, c); }},
      {"grid.m_theta", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.grid.m_theta = to_count(v, c); }},
      {"grid.m_lat", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.grid.m_lat = to_count(v, c); }},
      {"grid.m_lon", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.grid.m_lon = to_count(v, c); }},
      {"grid.scheme", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) {
         if (v == "second_order") {
           r.grid.scheme = LatitudeScheme::kSecondOrder;
         } else if (v == "spectral") {
           r.grid.scheme = LatitudeScheme::kSpectral;
         } else {
           c.fail("grid.scheme must be second_order or spectral");
         }
       }},
      {"f.kind", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) {
         if (v != "constant" && v != "quadratic" && v != "csv") c.fail("f.kind must be constant, quadratic or csv");
         r.f.kind = v;
       }},
      {"f.value", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.f.value = to_double(v, c); }},
      {"f.a", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.f.a = to_double(v, c); }},
      {"f.axis", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.f.axis = to_vec3(v, c); }},
      {"f.path", [](RunConfig& r, const std::string& v, const Ctx&, const std::string& base) { r.f.path = resolve(base, v); }},
      {"h.kind", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) {
         if (v != "constant" && v != "zonal" && v != "ellipsoid" && v != "csv") {
           c.fail("h.kind must be constant, zonal, ellipsoid or csv");
         }
         r.h.kind = v;
       }},
      {"h.value", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.h.value = to_double(v, c); }},
      {"h.eps", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.h.eps = to_double(v, c); }},
      {"h.axis", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.h.axis = to_vec3(v, c); }},
      {"h.axes", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.h.axes = to_vec3(v, c); }},
      {"h.path", [](RunConfig& r, const std::string& v, const Ctx&, const std::string& base) { r.h.path = resolve(base, v); }},
      {"newton.tol", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.newton_tol = to_double(v, c); }},
      {"newton.max_iter", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.newton_max_iter = to_count(v, c); }},
      {"continuation.dt0", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.continuation.dt0 = to_double(v, c); }},
      {"continuation.dt_min", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.continuation.dt_min = to_double(v, c); }},
      {"continuation.dt_max", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.continuation.dt_max = to_double(v, c); }},
      {"out.dir", [](RunConfig& r, const std::string& v, const Ctx&, const std::string& base) { r.out_dir = resolve(base, v); }},
      {"out.obj", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.out_obj = to_bool(v, c); }},
      {"seed", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) {
         const long long s = to_int(v, c);
         if (s < 0) c.fail("seed must be non-negative");
         r.seed = static_cast<std::uint64_t>(s);
       }},
      {"sweep.p", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.sweep_p = to_list(v, c); }},
      {"sweep.q", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.sweep_q = to_list(v, c); }},
      {"isotropic.restarts", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.isotropic_restarts = to_count(v, c); }},
      {"isotropic.amplitude", [](RunConfig& r, const std::string& v, const Ctx& c, const std::string&) { r.isotropic_amplitude = to_double(v, c); }},
  };
  return table;
}

Vec3 normalized(Vec3 v, int n) {
  if (n == 1) v[2] = 0.0;
  const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(len > 0.0)) throw PreconditionError("axis must be non-zero");
  return {v[0] / len, v[1] / len, v[2] / len};
}

}  // namespace

RunConfig parse_config(std::istream& is, const std::string& source, const std::string& base_dir) {
  RunConfig cfg;
  cfg.source = source;
  std::set<std::string> seen;
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const Ctx ctx{source, lineno};
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) ctx.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) ctx.fail("missing key");
    if (value.empty()) ctx.fail("missing value for '" + key + "'");
    const auto it = setters().find(key);
    if (it == setters().end()) ctx.fail("unknown key '" + key + "'");
    if (!seen.insert(key).second) ctx.fail("duplicate key '" + key + "'");
    it->second(cfg, value, ctx, base_dir);
  }
  for (const char* req : {"n", "k", "p", "q"}) {
    if (!seen.count(req)) throw ConfigError(source + ": missing required key '" + std::string(req) + "'", 0);
  }
  cfg.grid.n = cfg.n;
  if (cfg.f.kind == "csv" && cfg.f.path.empty()) throw ConfigError(source + ": f.kind = csv needs f.path", 0);
  if (cfg.h.kind == "csv" && cfg.h.path.empty()) throw ConfigError(source + ": h.kind = csv needs h.path", 0);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path, 0);
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_config(is, path, parent.empty() ? "." : parent.string());
}

GridFunction make_field(const FieldSpec& spec, const GridPtr& grid, int k, double p, bool is_data) {
  const int n = grid->dim();
  if (spec.kind == "constant") return GridFunction::constant(grid, spec.value);
  if (spec.kind == "csv") return read_grid_function_csv(spec.path, grid);
  const Vec3 axis = normalized(spec.axis, n);
  auto along = [axis](const Vec3& x) { return x[0] * axis[0] + x[1] * axis[1] + x[2] * axis[2]; };
  if (is_data && spec.kind == "quadratic") {
    const double e = k + p - 1.0;
    if (e <= 0.0) throw UnsupportedParameterError("quadratic family needs k + p - 1 > 0");
    const double a = spec.a;
    return GridFunction::sample(grid, [&](const Vec3& x) {
      const double s = along(x);
      return std::pow(1.0 + a * s * s, -e);
    });
  }
  if (!is_data && spec.kind == "zonal") {
    const double v = spec.value, eps = spec.eps;
    return GridFunction::sample(grid, [&](const Vec3& x) {
      const double s = along(x);
      return v + eps * (3.0 * s * s - 1.0) / 2.0;
    });
  }
  if (!is_data && spec.kind == "ellipsoid") {
    const Vec3 ax = spec.axes;
    return GridFunction::sample(grid, [ax](const Vec3& x) {
      return std::sqrt(ax[0] * ax[0] * x[0] * x[0] + ax[1] * ax[1] * x[1] * x[1] + ax[2] * ax[2] * x[2] * x[2]);
    });
  }
  throw PreconditionError("field kind '" + spec.kind + "' is not available here");
}

ProblemSpec make_problem(const RunConfig& cfg, double p, double q) {
  try {
    GridResolution res = cfg.grid;
    res.n = cfg.n;
    const GridPtr grid = build_grid(res);
    GridFunction f = make_field(cfg.f, grid, cfg.k, p, true);
    ProblemSpec spec(cfg.n, cfg.k, p, q, std::move(f));
    spec.tol_newton = cfg.newton_tol;
    spec.max_newton = cfg.newton_max_iter;
    spec.continuation = cfg.continuation;
    spec.validate();
    return spec;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(cfg.source + ": " + e.what(), 0);
  }
}

ProblemSpec make_problem(const RunConfig& cfg) { return make_problem(cfg, cfg.p, cfg.q); }

}  // namespace cmk
