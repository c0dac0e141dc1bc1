#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cmk/problem.hpp"

namespace cmk {

/// Scalar input on the sphere: a constant, a built-in family, or a CSV file.
///
/// For data f the family `quadratic` is f = (1 + a <x, axis>^2)^{-(k+p-1)}.
/// For a solution h the families are `zonal`, h = value + eps (3 <x, axis>^2 - 1) / 2,
/// and `ellipsoid`, h = sqrt(sum_i axes_i^2 x_i^2).
struct FieldSpec {
  std::string kind = "constant";
  double value = 1.0;
  double a = 0.0;
  double eps = 0.0;
  Vec3 axis{0.0, 0.0, 1.0};
  Vec3 axes{1.0, 1.0, 1.0};
  std::string path;  // resolved against the config file's directory
};

struct RunConfig {
  int n = 0;
  int k = 0;
  double p = 0.0;
  double q = 0.0;
  GridResolution grid;
  FieldSpec f;
  FieldSpec h;
  double newton_tol = 1e-10;
  int newton_max_iter = 30;
  ContinuationControls continuation;
  std::string out_dir = ".";
  bool out_obj = false;
  std::uint64_t seed = 1;
  std::vector<double> sweep_p;
  std::vector<double> sweep_q;
  int isotropic_restarts = 0;
  double isotropic_amplitude = 0.05;
  std::string source;
};

/// Flat `key = value` text with `#` comments. Unknown or duplicate keys,
/// malformed values and missing n/k/p/q raise ConfigError with the line.
RunConfig parse_config(std::istream& is, const std::string& source = "<config>", const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// Builds the grid and f, applies the controls and runs ProblemSpec::validate.
/// Every failure is reported as ConfigError.
ProblemSpec make_problem(const RunConfig& cfg);

/// Same problem with p and q replaced.
ProblemSpec make_problem(const RunConfig& cfg, double p, double q);

/// Samples the `h` field of the config on grid.
GridFunction make_field(const FieldSpec& spec, const GridPtr& grid, int k, double p, bool is_data);

}  // namespace cmk
