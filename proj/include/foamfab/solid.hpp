#pragma once

#include <vector>

#include "foamfab/mesh.hpp"
#include "foamfab/vec.hpp"

namespace foamfab {

// Sorted z values where the vertical line through (x, y) crosses the mesh
// surface. Watertight meshes yield an even count; the interior is the union
// of [z0,z1], [z2,z3], ... Degenerate hits (line through a vertex, an edge,
// or a vertical facet) are escaped by a deterministic epsilon perturbation of
// the line position, so callers always see a clean transversal result.
// Throws ValidationError if no perturbation attempt yields one.
std::vector<double> vertical_crossings(const TriangleMesh& mesh, double x, double y);

// Ray-parity containment test. Points on the surface classify to either side
// depending on the perturbation direction; callers needing surface semantics
// must keep a tolerance band of their own.
bool point_in_solid(const TriangleMesh& mesh, const Vec3& p);

} // namespace foamfab
