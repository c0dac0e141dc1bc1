#include "cmk/grid_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "cmk/error.hpp"

namespace cmk {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) {
    const auto b = cur.find_first_not_of(" \t\r");
    const auto e = cur.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
  }
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw IoError(where + ": not a number: '" + s + "'");
  return v;
}

// Periodic distance is used for longitude / theta, which sit on [0, 2pi).
double angle_gap(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0 * M_PI);
  return std::min(d, 2.0 * M_PI - d);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_grid_function_csv(std::ostream& os, const GridFunction& g) {
  const SphereGrid& grid = g.grid();
  if (grid.dim() == 1) {
    os << "theta,value\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      os << format_double(grid.theta(i)) << ',' << format_double(g[i]) << '\n';
    }
  } else {
    os << "lat,lon,value\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      os << format_double(grid.lat(i)) << ',' << format_double(grid.lon(i)) << ','
         << format_double(g[i]) << '\n';
    }
  }
}

void write_grid_function_csv(const std::string& path, const GridFunction& g) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_grid_function_csv(os, g);
  if (!os) throw IoError("write failed: " + path);
}

GridFunction read_grid_function_csv(std::istream& is, const GridPtr& grid, const std::string& source) {
  std::string line;
  if (!std::getline(is, line)) throw IoError(source + ": empty file");
  const auto header = split_csv(line);
  const bool s1 = grid->dim() == 1;
  const std::vector<std::string> expected = s1 ? std::vector<std::string>{"theta", "value"}
                                                : std::vector<std::string>{"lat", "lon", "value"};
  if (header != expected) {
    throw IoError(source + ":1: expected header '" + (s1 ? "theta,value" : "lat,lon,value") + "'");
  }
  Eigen::VectorXd values(static_cast<Eigen::Index>(grid->size()));
  std::size_t row = 0;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto cells = split_csv(line);
    if (cells.size() != expected.size()) throw IoError(where + ": expected " + std::to_string(expected.size()) + " columns");
    if (row >= grid->size()) throw IoError(where + ": more rows than grid nodes");
    if (s1) {
      const double th = parse_number(cells[0], where);
      if (angle_gap(th, grid->theta(row)) > 1e-12) throw IoError(where + ": theta does not match grid node");
    } else {
      const double lat = parse_number(cells[0], where);
      const double lon = parse_number(cells[1], where);
      if (std::abs(lat - grid->lat(row)) > 1e-12 || angle_gap(lon, grid->lon(row)) > 1e-12) {
        throw IoError(where + ": lat/lon does not match grid node");
      }
    }
    values[static_cast<Eigen::Index>(row)] = parse_number(cells.back(), where);
    ++row;
  }
  if (row != grid->size()) {
    throw IoError(source + ": " + std::to_string(row) + " rows for " + std::to_string(grid->size()) + " nodes");
  }
  return {grid, std::move(values)};
}

GridFunction read_grid_function_csv(const std::string& path, const GridPtr& grid) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  return read_grid_function_csv(is, grid, path);
}

}  // namespace cmk
