#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sceneforge/geometry.hpp"
#include "sceneforge/transform.hpp"

namespace sceneforge {

/// Indexed triangle mesh in meters. Per-vertex colors and UVs are optional
/// (empty, or one entry per vertex).
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<uint8_t, 3>> colors;
  std::vector<Eigen::Vector2d> uvs;
  std::string texture_path;  // relative path of the texture raster, if any

  bool empty() const { return vertices.empty() || triangles.empty(); }
  bool has_colors() const { return colors.size() == vertices.size(); }
  bool has_uvs() const { return uvs.size() == vertices.size(); }

  double triangle_area(int t) const {
    const auto& tri = triangles[t];
    const Vec3 e1 = vertices[tri[1]] - vertices[tri[0]];
    const Vec3 e2 = vertices[tri[2]] - vertices[tri[0]];
    return 0.5 * e1.cross(e2).norm();
  }

  double surface_area() const;
  Aabb aabb() const;

  /// Drops triangles with area ≤ 1e-12 m² and out-of-range indices.
  void clean();

  TriangleMesh transformed(const SimilarityTransform& t) const;
};

/// Loads .obj or .ply (ascii / binary_little_endian) by extension; validates
/// indices and cleans degenerate triangles.
TriangleMesh load_mesh(const std::string& path);

void save_mesh_ply(const std::string& path, const TriangleMesh& mesh,
                   bool binary = true);
void save_mesh_obj(const std::string& path, const TriangleMesh& mesh);

/// Signed volume via the divergence theorem (Σ det(v0,v1,v2)/6). Positive for
/// outward-oriented watertight meshes.
double signed_volume(const TriangleMesh& mesh);

/// True when every edge is shared by exactly two triangles with opposite
/// orientation.
bool is_watertight(const TriangleMesh& mesh);

/// Convex hull of a point set (incremental construction). Needs ≥ 4
/// non-coplanar points.
TriangleMesh convex_hull(const std::vector<Vec3>& points);

}  // namespace sceneforge
