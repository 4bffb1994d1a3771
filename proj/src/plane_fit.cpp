#include "sceneforge/plane_fit.hpp"

#include <Eigen/Eigenvalues>

#include "sceneforge/parallel.hpp"
#include "sceneforge/rng.hpp"

namespace sceneforge {

namespace {

// Least-squares plane through a point subset: centroid + eigenvector of the
// smallest covariance eigenvalue.
Plane fit_plane_lsq(const PointCloud& cloud, const std::vector<int>& idx) {
  Vec3 c = Vec3::Zero();
  for (int i : idx) c += cloud.points[i];
  c /= static_cast<double>(idx.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (int i : idx) {
    const Vec3 d = cloud.points[i] - c;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  Vec3 n = es.eigenvectors().col(0);  // ascending eigenvalues
  n.normalize();
  return {n, n.dot(c)};
}

int count_inliers(const PointCloud& cloud, const Plane& plane, double dist) {
  int n = 0;
  for (const Vec3& p : cloud.points)
    if (std::abs(plane.signed_distance(p)) <= dist) ++n;
  return n;
}

}  // namespace

Plane ransac_plane(const PointCloud& candidates, const RansacConfig& cfg) {
  const int n = static_cast<int>(candidates.size());
  if (n < 3)
    throw DegenerateInputError("ransac_plane: need at least 3 points, got " +
                               std::to_string(n));

  // Pre-generate all hypothesis samples so scoring order cannot affect the
  // random stream.
  Rng rng(cfg.seed);
  std::vector<std::array<int, 3>> samples(cfg.iterations);
  for (auto& s : samples) {
    s[0] = static_cast<int>(rng.uniform_index(n));
    do {
      s[1] = static_cast<int>(rng.uniform_index(n));
    } while (s[1] == s[0]);
    do {
      s[2] = static_cast<int>(rng.uniform_index(n));
    } while (s[2] == s[0] || s[2] == s[1]);
  }

  std::vector<int> scores(cfg.iterations, -1);
  std::vector<Plane> planes(cfg.iterations);
  parallel_for(0, cfg.iterations, cfg.threads, [&](int it) {
    const Vec3& a = candidates.points[samples[it][0]];
    const Vec3& b = candidates.points[samples[it][1]];
    const Vec3& c = candidates.points[samples[it][2]];
    Vec3 nrm = (b - a).cross(c - a);
    const double len = nrm.norm();
    if (len < 1e-14) return;  // collinear sample
    nrm /= len;
    const Plane hyp{nrm, nrm.dot(a)};
    planes[it] = hyp;
    scores[it] = count_inliers(candidates, hyp, cfg.inlier_distance);
  });

  int best = -1, best_score = -1;
  for (int it = 0; it < cfg.iterations; ++it)
    if (scores[it] > best_score) {
      best_score = scores[it];
      best = it;
    }
  if (best < 0)
    throw DegenerateInputError("ransac_plane: all hypothesis samples collinear");

  // Refine on the winning inlier set.
  std::vector<int> inliers;
  inliers.reserve(best_score);
  for (int i = 0; i < n; ++i)
    if (std::abs(planes[best].signed_distance(candidates.points[i])) <=
        cfg.inlier_distance)
      inliers.push_back(i);
  Plane refined = fit_plane_lsq(candidates, inliers);

  const int refined_count = count_inliers(candidates, refined, cfg.inlier_distance);
  if (static_cast<double>(refined_count) < cfg.min_inlier_fraction * n)
    throw LowConfidencePlaneError(
        refined, refined_count,
        "ransac_plane: inlier fraction " +
            std::to_string(static_cast<double>(refined_count) / n) +
            " below floor " + std::to_string(cfg.min_inlier_fraction));
  return refined;
}

Quat rodrigues_to_z(const Vec3& n) {
  // sinθ = ‖n×z‖, cosθ = n·z; atan2 keeps θ well-conditioned at both poles.
  const double sin_theta = std::hypot(n.x(), n.y());
  const double cos_theta = n.z();
  if (sin_theta < 1e-14) {
    if (cos_theta > 0.0) return Quat::Identity();
    return Quat(Eigen::AngleAxisd(M_PI, Vec3::UnitX()));  // exact antipode
  }
  const Vec3 axis(n.y() / sin_theta, -n.x() / sin_theta, 0.0);
  const double theta = std::atan2(sin_theta, cos_theta);
  return Quat(Eigen::AngleAxisd(theta, axis));
}

AlignmentResult align_scene(const PointCloud& cloud,
                            const PointCloud& ground_candidates,
                            const Intrinsics& K, const RansacConfig& cfg) {
  (void)K;
  const PointCloud& ground =
      ground_candidates.empty() ? cloud : ground_candidates;
  Plane plane = ransac_plane(ground, cfg);

  // Orient the normal so the majority of off-plane points sit on the
  // positive side (objects rest on top of the supported plane).
  long above = 0, below = 0;
  for (const Vec3& p : cloud.points) {
    const double d = plane.signed_distance(p);
    if (d > cfg.inlier_distance)
      ++above;
    else if (d < -cfg.inlier_distance)
      ++below;
  }
  if (below > above) plane = plane.flipped();
  if (above == 0 && below == 0) {
    // Pure-plane scene: point the normal at the camera origin.
    if (plane.signed_distance(Vec3::Zero()) < 0) plane = plane.flipped();
  }

  AlignmentResult res;
  res.plane = plane;
  res.rotation = rodrigues_to_z(plane.normal);
  res.inlier_count = count_inliers(ground, plane, cfg.inlier_distance);

  // After rotation the plane is z = offset; lift it to z = 0 and put the
  // projected scene centroid at the origin.
  const Vec3 centroid_rot = res.rotation * cloud.centroid();
  const Vec3 t(-centroid_rot.x(), -centroid_rot.y(), -plane.offset);
  res.world_from_camera = RigidTransform{res.rotation, t};
  return res;
}

}  // namespace sceneforge
