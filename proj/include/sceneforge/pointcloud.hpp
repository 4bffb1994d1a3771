#pragma once

#include <array>
#include <vector>

#include "sceneforge/geometry.hpp"
#include "sceneforge/transform.hpp"

namespace sceneforge {

/// Metric 3D points with optional per-point pixel provenance (col, row) and
/// instance label. Provenance/label vectors are either empty or sized like
/// `points`.
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<std::array<int, 2>> pixels;
  std::vector<int> labels;

  size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_provenance() const { return pixels.size() == points.size(); }
  bool has_labels() const { return labels.size() == points.size(); }

  void reserve(size_t n) {
    points.reserve(n);
    pixels.reserve(n);
    labels.reserve(n);
  }

  void push(const Vec3& p) { points.push_back(p); }

  void push(const Vec3& p, int px, int py, int label) {
    points.push_back(p);
    pixels.push_back({px, py});
    labels.push_back(label);
  }

  Vec3 centroid() const {
    Vec3 c = Vec3::Zero();
    for (const Vec3& p : points) c += p;
    return points.empty() ? c : Vec3(c / static_cast<double>(points.size()));
  }

  Aabb aabb() const {
    Aabb box;
    for (const Vec3& p : points) box.expand(p);
    return box;
  }

  PointCloud transformed(const RigidTransform& t) const {
    PointCloud out = *this;
    for (Vec3& p : out.points) p = t.apply(p);
    return out;
  }
};

}  // namespace sceneforge
