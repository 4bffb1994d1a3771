#pragma once

#include <map>

#include "sceneforge/image.hpp"
#include "sceneforge/pointcloud.hpp"

namespace sceneforge {

/// Inverse projection X = D(u,v) · K⁻¹ [u,v,1]ᵀ over all valid-depth pixels,
/// row-major scan order, pixel-center sampling. Invalid pixels are skipped.
PointCloud unproject(const DepthImage& depth, const Intrinsics& K);

/// Pinhole projection; returns (u, v, depth). Throws for z ≤ 0.
struct PixelCoord {
  double u, v, depth;
};
PixelCoord project(const Vec3& point, const Intrinsics& K);

/// Splits a provenance-carrying cloud by instance label.
struct Partition {
  PointCloud background;
  std::map<int, PointCloud> objects;
};
Partition partition(const PointCloud& cloud, const InstanceMask& mask);

}  // namespace sceneforge
