#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "cmk/sphere_grid.hpp"

namespace cmk {

/// Boundary sampling of the convex body with support function h: one vertex
/// X(x) = grad h(x) + h(x) x per grid node, with outward normal x.
struct BodyMesh {
  int dim = 0;
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<std::array<std::size_t, 3>> triangles;  // S^2, counter-clockwise seen from outside
  std::vector<std::array<std::size_t, 2>> segments;   // S^1, closed polyline
  std::string warning;  // set when b(h) is not positive definite somewhere

  Vec3 centroid() const;
};

/// Throws PreconditionError when h <= 0 somewhere. For even h antipodal
/// vertices are exact negatives of each other.
BodyMesh reconstruct_body(const GridFunction& h);

/// rho(u) = max{s > 0 : s u in K}, computed as the minimum of h(x) / <x, u>
/// over nodes with <x, u> > 0, refined by a second-order model of h at the
/// nearby nodes. Throws
/// AdmissibilityError when b(h) is not positive definite.
std::vector<double> radial_function(const GridFunction& h, const std::vector<Vec3>& directions);

void write_obj(std::ostream& os, const BodyMesh& mesh);
void write_obj(const std::string& path, const BodyMesh& mesh);

/// Reads `v` and `f` records (triangles or quads, the latter split).
BodyMesh read_obj(std::istream& is, const std::string& source = "<stream>");
BodyMesh read_obj(const std::string& path);

/// `x,y` per vertex for the S^1 polyline.
void write_polyline_csv(std::ostream& os, const BodyMesh& mesh);
void write_polyline_csv(const std::string& path, const BodyMesh& mesh);

/// Signed volume (S^2) or area (S^1) enclosed by the mesh.
double enclosed_measure(const BodyMesh& mesh);

}  // namespace cmk
