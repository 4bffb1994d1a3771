#pragma once

#include <array>
#include <limits>
#include <optional>

#include "sceneforge/transform.hpp"

namespace sceneforge {

/// Plane {x : normal·x = offset}, normal unit length.
struct Plane {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;

  double signed_distance(const Vec3& x) const { return normal.dot(x) - offset; }

  Plane flipped() const { return {-normal, -offset}; }

  /// Plane expressed in the frame reached by applying `t` to points.
  Plane transformed(const RigidTransform& t) const {
    const Vec3 n = t.rotation * normal;
    // A point on the plane maps to t.apply(p); new offset = n·(R p + tr).
    return {n, offset + n.dot(t.translation)};
  }
};

struct Aabb {
  Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

  bool empty() const { return !(min.x() <= max.x()); }

  void expand(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }

  void expand(const Aabb& b) {
    min = min.cwiseMin(b.min);
    max = max.cwiseMax(b.max);
  }

  Aabb inflated(double margin) const {
    return {min - Vec3::Constant(margin), max + Vec3::Constant(margin)};
  }

  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }

  Vec3 center() const { return 0.5 * (min + max); }

  Vec3 closest_point(const Vec3& p) const {
    return p.cwiseMax(min).cwiseMin(max);
  }

  std::array<Vec3, 8> corners() const {
    std::array<Vec3, 8> c;
    for (int i = 0; i < 8; ++i)
      c[i] = Vec3(i & 1 ? max.x() : min.x(), i & 2 ? max.y() : min.y(),
                  i & 4 ? max.z() : min.z());
    return c;
  }
};

/// Ray through origin `o` with direction `d` (need not be unit length).
/// Hits are reported as the ray parameter t with point = o + t·d.
struct Ray {
  Vec3 origin;
  Vec3 dir;

  Vec3 at(double t) const { return origin + t * dir; }
};

/// Parameter of the ray/plane intersection, or nullopt when parallel.
inline std::optional<double> intersect_ray_plane(const Ray& r, const Plane& p) {
  const double denom = p.normal.dot(r.dir);
  if (std::abs(denom) < 1e-12) return std::nullopt;
  return (p.offset - p.normal.dot(r.origin)) / denom;
}

/// Slab test; returns [t_enter, t_exit] of the ray/AABB overlap if any.
inline std::optional<std::pair<double, double>> intersect_ray_aabb(
    const Ray& r, const Aabb& box) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double d = r.dir[a];
    if (std::abs(d) < 1e-15) {
      if (r.origin[a] < box.min[a] || r.origin[a] > box.max[a])
        return std::nullopt;
      continue;
    }
    double ta = (box.min[a] - r.origin[a]) / d;
    double tb = (box.max[a] - r.origin[a]) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  return std::make_pair(t0, t1);
}

/// Pinhole intrinsics; (u,v) are pixel coordinates, samples at pixel centers
/// (index i,j ↦ u = i + 0.5, v = j + 0.5).
struct Intrinsics {
  double fx = 0.0, fy = 0.0;
  double cx = 0.0, cy = 0.0;
  int width = 0, height = 0;

  bool valid() const {
    return fx > 0 && fy > 0 && width > 0 && height > 0 && cx >= 0 &&
           cx < width && cy >= 0 && cy < height;
  }

  /// Unit-z ray direction K⁻¹[u,v,1]ᵀ in the camera frame.
  Vec3 ray_dir(double u, double v) const {
    return {(u - cx) / fx, (v - cy) / fy, 1.0};
  }
};

}  // namespace sceneforge
