#include "sceneforge/unproject.hpp"

#include "sceneforge/error.hpp"

namespace sceneforge {

PointCloud unproject(const DepthImage& depth, const Intrinsics& K) {
  if (depth.width != K.width || depth.height != K.height)
    throw ConfigError("depth dimensions do not match intrinsics");
  PointCloud cloud;
  cloud.reserve(static_cast<size_t>(depth.width) * depth.height);
  for (int j = 0; j < depth.height; ++j) {
    const double v = j + 0.5;
    for (int i = 0; i < depth.width; ++i) {
      if (!depth.valid(i, j)) continue;
      const double d = depth.at(i, j);
      const double u = i + 0.5;
      cloud.push(Vec3(d * (u - K.cx) / K.fx, d * (v - K.cy) / K.fy, d), i, j, 0);
    }
  }
  return cloud;
}

PixelCoord project(const Vec3& point, const Intrinsics& K) {
  if (point.z() <= 0.0)
    throw BehindCameraError("cannot project point with z <= 0");
  return {K.fx * point.x() / point.z() + K.cx,
          K.fy * point.y() / point.z() + K.cy, point.z()};
}

Partition partition(const PointCloud& cloud, const InstanceMask& mask) {
  if (!cloud.has_provenance())
    throw ConfigError("partition requires pixel provenance");
  Partition out;
  for (size_t n = 0; n < cloud.size(); ++n) {
    const auto [px, py] = cloud.pixels[n];
    if (px < 0 || px >= mask.width || py < 0 || py >= mask.height)
      throw ConfigError("cloud provenance outside mask bounds");
    const int label = mask.at(px, py);
    PointCloud& dst = label == 0 ? out.background : out.objects[label];
    dst.push(cloud.points[n], px, py, label);
  }
  return out;
}

}  // namespace sceneforge
