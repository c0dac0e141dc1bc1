#pragma once

#include <iosfwd>
#include <string>

#include "cmk/sphere_grid.hpp"

namespace cmk {

/// CSV with header `theta,value` (S^1) or `lat,lon,value` (S^2), one row per
/// node in node order, 17 significant digits.
void write_grid_function_csv(std::ostream& os, const GridFunction& g);
void write_grid_function_csv(const std::string& path, const GridFunction& g);

/// Reads a CSV written for `grid`; rejects wrong headers, row counts, or
/// coordinates that do not match the grid nodes.
GridFunction read_grid_function_csv(std::istream& is, const GridPtr& grid, const std::string& source = "<stream>");
GridFunction read_grid_function_csv(const std::string& path, const GridPtr& grid);

/// printf("%.17g").
std::string format_double(double v);

}  // namespace cmk
