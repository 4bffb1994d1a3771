#include "sceneforge/background.hpp"

#include <unordered_map>

#include "sceneforge/error.hpp"

namespace sceneforge {

TriangleMesh mesh_from_depth_grid(const PointCloud& cloud, const Intrinsics& K,
                                  const BackgroundBuildConfig& cfg,
                                  const ColorImage* colors) {
  if (cloud.empty()) throw DegenerateInputError("mesh_from_depth_grid: empty cloud");
  if (!cloud.has_provenance())
    throw ConfigError("mesh_from_depth_grid: cloud lacks pixel provenance");

  // Pixel grid → vertex index.
  std::unordered_map<uint64_t, int> grid;
  grid.reserve(cloud.size());
  auto key = [](int x, int y) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(y)) << 32) |
           static_cast<uint32_t>(x);
  };

  TriangleMesh mesh;
  mesh.vertices.reserve(cloud.size());
  for (size_t i = 0; i < cloud.size(); ++i) {
    grid[key(cloud.pixels[i][0], cloud.pixels[i][1])] = static_cast<int>(i);
    mesh.vertices.push_back(cloud.points[i]);
    if (colors) {
      const auto [px, py] = cloud.pixels[i];
      if (px >= 0 && px < colors->width && py >= 0 && py < colors->height) {
        const uint8_t* c = colors->px(px, py);
        mesh.colors.push_back({c[0], c[1], c[2]});
      } else {
        mesh.colors.push_back({128, 128, 128});
      }
    }
  }

  auto vertex_at = [&](int x, int y) -> int {
    auto it = grid.find(key(x, y));
    return it == grid.end() ? -1 : it->second;
  };
  auto edge_ok = [&](int a, int b) {
    // Local footprint from the deeper endpoint; vertex z is the camera-frame
    // depth for organized single-view clouds.
    const double z = std::max(mesh.vertices[a].z(), mesh.vertices[b].z());
    const double footprint = z / K.fx;
    return (mesh.vertices[a] - mesh.vertices[b]).norm() <=
           cfg.discontinuity_ratio * footprint;
  };

  // Bounds of the occupied pixel grid.
  int x0 = K.width, x1 = -1, y0 = K.height, y1 = -1;
  for (const auto& px : cloud.pixels) {
    x0 = std::min(x0, px[0]);
    x1 = std::max(x1, px[0]);
    y0 = std::min(y0, px[1]);
    y1 = std::max(y1, px[1]);
  }

  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const int a = vertex_at(x, y);
      const int b = vertex_at(x + 1, y);
      const int c = vertex_at(x, y + 1);
      const int d = vertex_at(x + 1, y + 1);
      if (a < 0 || b < 0 || c < 0 || d < 0) continue;
      // Fixed diagonal a-d keeps output independent of traversal order.
      if (edge_ok(a, b) && edge_ok(b, d) && edge_ok(a, d))
        mesh.triangles.push_back({a, b, d});
      if (edge_ok(a, d) && edge_ok(d, c) && edge_ok(a, c))
        mesh.triangles.push_back({a, d, c});
    }
  }
  return mesh;
}

PointCloud complete_holes(const InstanceMask& mask, const Intrinsics& K,
                          const Plane& plane, const Aabb& scene_aabb,
                          const RigidTransform& camera_pose,
                          const BackgroundBuildConfig& cfg) {
  PointCloud out;
  const Vec3 origin = camera_pose.translation;
  const Aabb inflated = scene_aabb.inflated(cfg.aabb_inflation);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (mask.at(x, y) == 0) continue;
      // Direction scaled so the ray parameter equals camera-space depth.
      const Vec3 dir = camera_pose.rotation * K.ray_dir(x + 0.5, y + 0.5);
      const Ray ray{origin, dir};
      const auto t_plane = intersect_ray_plane(ray, plane);
      if (t_plane && *t_plane >= cfg.near_clip && *t_plane <= cfg.far_clip) {
        Vec3 p = ray.at(*t_plane);
        p -= plane.normal * plane.signed_distance(p);  // snap onto the plane
        out.push(p, x, y, 0);
        continue;
      }
      const auto t_box = intersect_ray_aabb(ray, inflated);
      if (t_box) {
        const double t_hit = std::max(t_box->first, cfg.near_clip);
        if (t_hit <= t_box->second && t_hit <= cfg.far_clip) {
          Vec3 p = ray.at(t_hit);
          // Snap to the nearest box face so the face-membership invariant
          // holds exactly.
          double best = std::numeric_limits<double>::infinity();
          int axis = 0;
          double face = 0.0;
          for (int a = 0; a < 3; ++a) {
            for (const double f : {inflated.min[a], inflated.max[a]}) {
              const double d = std::abs(p[a] - f);
              if (d < best) {
                best = d;
                axis = a;
                face = f;
              }
            }
          }
          p[axis] = face;
          out.push(p, x, y, 0);
        }
      }
    }
  }
  return out;
}

}  // namespace sceneforge
