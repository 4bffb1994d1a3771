#pragma once

#include "sceneforge/image.hpp"
#include "sceneforge/mesh.hpp"
#include "sceneforge/pointcloud.hpp"

namespace sceneforge {

struct BackgroundBuildConfig {
  double discontinuity_ratio = 5.0;  // edge-rejection threshold, > 1
  bool use_plane_primitive = false;
  double aabb_inflation = 0.05;  // meters
  double near_clip = 0.05;       // meters (ray-parameter window)
  double far_clip = 100.0;
};

/// Triangulates an organized (pixel-provenance) cloud expressed in the
/// camera frame: two triangles per 2×2 quad whose four corners exist, a
/// triangle dropped when any edge exceeds discontinuity_ratio × the local
/// pixel footprint (depth/fx). When `colors` is non-null, matching pixels of
/// that image become vertex colors.
TriangleMesh mesh_from_depth_grid(const PointCloud& cloud, const Intrinsics& K,
                                  const BackgroundBuildConfig& cfg,
                                  const ColorImage* colors = nullptr);

/// Ray-casts every object pixel (mask label > 0) against the supported plane,
/// falling back to the inflated scene AABB; pixels hitting neither are
/// omitted. Plane/AABB/camera pose are world-frame; output points are
/// world-frame with pixel provenance.
PointCloud complete_holes(const InstanceMask& mask, const Intrinsics& K,
                          const Plane& plane, const Aabb& scene_aabb,
                          const RigidTransform& camera_pose,
                          const BackgroundBuildConfig& cfg);

}  // namespace sceneforge
