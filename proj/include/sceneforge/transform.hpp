#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace sceneforge {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

/// Rigid body transform: x ↦ R·x + t with R a unit quaternion.
struct RigidTransform {
  Quat rotation = Quat::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  static RigidTransform from_axis_angle(const Vec3& axis, double angle,
                                        const Vec3& t = Vec3::Zero()) {
    return {Quat(Eigen::AngleAxisd(angle, axis.normalized())), t};
  }

  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }

  RigidTransform inverse() const {
    const Quat qi = rotation.conjugate();
    return {qi, qi * (-translation)};
  }

  Eigen::Matrix4d matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation.toRotationMatrix();
    m.topRightCorner<3, 1>() = translation;
    return m;
  }

  bool is_unit(double tol = 1e-9) const {
    return std::abs(rotation.norm() - 1.0) <= tol;
  }
};

/// compose(a, b): applying the result equals applying b, then a.
inline RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return {(a.rotation * b.rotation).normalized(),
          a.rotation * b.translation + a.translation};
}

/// Uniform-scale similarity: x ↦ R·(s·x) + t.
struct SimilarityTransform {
  RigidTransform rigid;
  double scale = 1.0;

  static SimilarityTransform identity() { return {}; }

  Vec3 apply(const Vec3& x) const { return rigid.apply(scale * x); }

  SimilarityTransform inverse() const {
    const Quat qi = rigid.rotation.conjugate();
    const double si = 1.0 / scale;
    return {{qi, si * (qi * (-rigid.translation))}, si};
  }

  Eigen::Matrix4d matrix() const {
    Eigen::Matrix4d m = rigid.matrix();
    m.topLeftCorner<3, 3>() *= scale;
    return m;
  }
};

inline Vec3 transform_point(const SimilarityTransform& t, const Vec3& x) {
  return t.apply(x);
}

inline Vec3 transform_point(const RigidTransform& t, const Vec3& x) {
  return t.apply(x);
}

/// Rotation angle in radians between two unit quaternions.
inline double rotation_angle(const Quat& a, const Quat& b) {
  const double d = std::min(1.0, std::abs(a.dot(b)));
  return 2.0 * std::acos(d);
}

}  // namespace sceneforge
