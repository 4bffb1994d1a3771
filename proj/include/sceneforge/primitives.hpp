#pragma once

#include "sceneforge/mesh.hpp"

namespace sceneforge {

// Watertight, outward-oriented primitives used by the synthetic-scene
// generator and tests. Prisms rest on z = 0 with the footprint centroid at
// the xy origin.

/// Axis-aligned box, base on z = 0, centered in x/y.
TriangleMesh make_box(double sx, double sy, double sz);

/// Right-triangle prism: footprint legs a (x) and b (y), height h.
TriangleMesh make_wedge(double a, double b, double h);

/// L-shaped prism: an a×b slab with a cut_a×cut_b notch removed from the
/// +x/+y corner, height h. No rotational symmetry for any cut < full side.
TriangleMesh make_lprism(double a, double b, double cut_a, double cut_b,
                         double h);

/// Icosphere centered at the origin.
TriangleMesh make_icosphere(double radius, int subdivisions);

/// z = 0 grid of nx×ny cells spanning sx×sy meters, centered at the origin,
/// with checkerboard vertex colors.
TriangleMesh make_plane_grid(double sx, double sy, int nx, int ny,
                             std::array<uint8_t, 3> color_a,
                             std::array<uint8_t, 3> color_b);

}  // namespace sceneforge
