#pragma once

#include <cstdint>

#include "sceneforge/error.hpp"
#include "sceneforge/pointcloud.hpp"

namespace sceneforge {

struct RansacConfig {
  int iterations = 1000;
  double inlier_distance = 0.008;   // meters
  double min_inlier_fraction = 0.15;
  uint64_t seed = 0;
  int threads = 1;
};

/// Thrown when the best plane's inlier fraction is below the configured
/// floor; carries the best plane found so callers can inspect it.
class LowConfidencePlaneError : public Error {
 public:
  LowConfidencePlaneError(const Plane& best, int inliers, const std::string& w)
      : Error(ErrorCode::low_confidence, w), best_plane(best),
        inlier_count(inliers) {}
  Plane best_plane;
  int inlier_count;
};

/// RANSAC plane fit: best-consensus 3-point hypothesis over cfg.iterations
/// samples, refined by least squares (smallest principal component of the
/// inlier covariance) on the winning inlier set. Deterministic given seed;
/// hypothesis sample indices are pre-generated so scoring may run in
/// parallel, ties resolve to the lowest hypothesis index.
Plane ransac_plane(const PointCloud& candidates, const RansacConfig& cfg);

/// Rotation (unit quaternion) mapping unit vector n onto +Z, built from the
/// axis k = (n×z)/‖n×z‖ and angle θ = atan2(‖n×z‖, n·z). Degenerate cases:
/// near-identity → identity; exact antipode → π about the x-axis.
Quat rodrigues_to_z(const Vec3& n);

struct AlignmentResult {
  Plane plane;                      // camera frame, sign-oriented (objects up)
  Quat rotation;                    // the Rodrigues rotation
  RigidTransform world_from_camera; // rigid map camera coords → world coords
  int inlier_count = 0;
};

/// Full gravity alignment: RANSAC plane on ground_candidates (falls back to
/// `cloud` when empty), normal sign fixed so most off-plane points end up
/// above, Rodrigues rotation to +Z, then translation placing the plane at
/// z = 0 with the scene centroid's projection at the origin.
AlignmentResult align_scene(const PointCloud& cloud,
                            const PointCloud& ground_candidates,
                            const Intrinsics& K, const RansacConfig& cfg);

}  // namespace sceneforge
