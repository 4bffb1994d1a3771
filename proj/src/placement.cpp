#include "sceneforge/placement.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "sceneforge/error.hpp"
#include "sceneforge/rng.hpp"

namespace sceneforge {

namespace {

// 2D distance from a point to a rectangle (0 when inside).
double dist_to_rect_2d(double x, double y, double x0, double y0, double x1,
                       double y1) {
  const double dx = std::max({x0 - x, 0.0, x - x1});
  const double dy = std::max({y0 - y, 0.0, y - y1});
  return std::hypot(dx, dy);
}

struct Slack {
  double coverage;
  double collision;
  double value() const { return std::min(coverage, collision); }
};

Slack evaluate_candidate(const Vec3& base, const std::vector<Aabb>& objects,
                         const Aabb& scene, const RobotProfile& profile,
                         double margin) {
  const Vec3 shoulder = base + Vec3(0, 0, profile.mount_height);

  double coverage = std::numeric_limits<double>::infinity();
  for (const Aabb& box : objects) {
    double max_d = 0.0;
    for (const Vec3& c : box.corners())
      max_d = std::max(max_d, (c - shoulder).norm());
    const double min_d = (box.closest_point(shoulder) - shoulder).norm();
    coverage = std::min({coverage, profile.r_max - max_d, min_d - profile.r_min});
  }

  // Footprint disc vs the scene cross-section, inflated by the margin.
  double collision =
      dist_to_rect_2d(base.x(), base.y(), scene.min.x() - margin,
                      scene.min.y() - margin, scene.max.x() + margin,
                      scene.max.y() + margin) -
      profile.base_radius;
  // Base point vs each inflated object box.
  for (const Aabb& box : objects) {
    const Aabb infl = box.inflated(margin);
    if (infl.contains(base)) {
      collision = std::min(collision, -1.0);
    } else {
      collision = std::min(collision, (infl.closest_point(base) - base).norm());
    }
  }
  return {coverage, collision};
}

}  // namespace

std::vector<PlacementCandidate> sample_placements(
    const std::vector<Aabb>& objects_aabbs, const Aabb& scene_aabb,
    const RobotProfile& profile, const PlacementConfig& cfg) {
  if (objects_aabbs.empty())
    throw DegenerateInputError("sample_placements: no object AABBs");
  if (!(profile.r_min >= 0) || !(profile.r_min < profile.r_max) ||
      !(profile.base_radius > 0))
    throw ConfigError("sample_placements: invalid robot profile");

  Aabb combined;
  for (const Aabb& b : objects_aabbs) combined.expand(b);
  const Vec3 center(combined.center().x(), combined.center().y(), 0.0);

  // Stratified annulus: angle-major strata with seeded jitter.
  Rng rng(cfg.seed);
  const int n_angle = std::max(8, static_cast<int>(std::sqrt(4.0 * cfg.n_samples)));
  const int n_radius = std::max(1, (cfg.n_samples + n_angle - 1) / n_angle);

  std::vector<PlacementCandidate> kept;
  double best_rejected = -std::numeric_limits<double>::infinity();
  Slack best_rejected_slack{-1, -1};
  for (int i = 0; i < cfg.n_samples; ++i) {
    const int ia = i % n_angle;
    const int ir = i / n_angle % n_radius;
    const double theta = (ia + rng.uniform()) * 2.0 * M_PI / n_angle;
    const double radius =
        profile.r_min +
        (ir + rng.uniform()) * (profile.r_max - profile.r_min) / n_radius;
    const Vec3 base = center + radius * Vec3(std::cos(theta), std::sin(theta), 0.0);

    const Slack s =
        evaluate_candidate(base, objects_aabbs, scene_aabb, profile, cfg.margin);
    if (s.value() >= 0.0) {
      PlacementCandidate cand;
      const double yaw = std::atan2(center.y() - base.y(), center.x() - base.x());
      cand.base_pose =
          RigidTransform{Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ())), base};
      cand.clearance = s.value();
      kept.push_back(cand);
    } else if (s.value() > best_rejected) {
      best_rejected = s.value();
      best_rejected_slack = s;
    }
  }

  if (kept.empty()) {
    const char* tightest =
        best_rejected_slack.coverage < best_rejected_slack.collision
            ? "workspace coverage (objects outside the [r_min, r_max] shell)"
            : "collision (footprint inside the scene/object boxes)";
    throw NoPlacementError(
        std::string("sample_placements: no valid candidate in ") +
        std::to_string(cfg.n_samples) + " samples; tightest violated "
        "constraint: " + tightest);
  }

  std::stable_sort(kept.begin(), kept.end(),
                   [](const PlacementCandidate& a, const PlacementCandidate& b) {
                     return a.clearance > b.clearance;
                   });
  return kept;
}

PlacementReport verify_placement(const PlacementCandidate& candidate,
                                 const std::vector<Aabb>& objects_aabbs,
                                 const Aabb& scene_aabb,
                                 const RobotProfile& profile, double margin) {
  // Recomputed from scratch, brute force over corners and clamped points.
  PlacementReport rep;
  const Vec3 base = candidate.base_pose.translation;
  const Vec3 shoulder = base + Vec3(0.0, 0.0, profile.mount_height);

  rep.coverage_margin = std::numeric_limits<double>::infinity();
  for (const Aabb& box : objects_aabbs) {
    double max_d = 0.0;
    for (int cz = 0; cz < 2; ++cz)
      for (int cy = 0; cy < 2; ++cy)
        for (int cx = 0; cx < 2; ++cx) {
          const Vec3 corner(cx ? box.max.x() : box.min.x(),
                            cy ? box.max.y() : box.min.y(),
                            cz ? box.max.z() : box.min.z());
          max_d = std::max(max_d, (corner - shoulder).norm());
        }
    const Vec3 clamped(std::clamp(shoulder.x(), box.min.x(), box.max.x()),
                       std::clamp(shoulder.y(), box.min.y(), box.max.y()),
                       std::clamp(shoulder.z(), box.min.z(), box.max.z()));
    const double min_d = (clamped - shoulder).norm();
    rep.coverage_margin = std::min(
        {rep.coverage_margin, profile.r_max - max_d, min_d - profile.r_min});
  }

  const double sx0 = scene_aabb.min.x() - margin, sx1 = scene_aabb.max.x() + margin;
  const double sy0 = scene_aabb.min.y() - margin, sy1 = scene_aabb.max.y() + margin;
  const double ddx = std::max({sx0 - base.x(), 0.0, base.x() - sx1});
  const double ddy = std::max({sy0 - base.y(), 0.0, base.y() - sy1});
  rep.collision_margin = std::sqrt(ddx * ddx + ddy * ddy) - profile.base_radius;
  for (const Aabb& box : objects_aabbs) {
    const Aabb infl = box.inflated(margin);
    if (infl.contains(base))
      rep.collision_margin = std::min(rep.collision_margin, -1.0);
    else
      rep.collision_margin = std::min(
          rep.collision_margin, (infl.closest_point(base) - base).norm());
  }

  rep.ok = rep.coverage_margin >= 0.0 && rep.collision_margin >= 0.0 &&
           std::abs(base.z()) < 1e-12;
  return rep;
}

RobotProfile load_robot_profile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open robot profile " + path);
  nlohmann::json j;
  f >> j;
  RobotProfile p;
  p.name = j.value("name", "arm");
  p.r_min = j.at("r_min").get<double>();
  p.r_max = j.at("r_max").get<double>();
  p.mount_height = j.at("mount_height").get<double>();
  p.base_radius = j.at("base_radius").get<double>();
  if (!(p.r_min >= 0 && p.r_min < p.r_max && p.base_radius > 0))
    throw ConfigError("robot profile " + path + " violates 0 <= r_min < r_max");
  return p;
}

void save_robot_profile(const std::string& path, const RobotProfile& profile) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write robot profile " + path);
  nlohmann::json j{{"name", profile.name},
                   {"r_min", profile.r_min},
                   {"r_max", profile.r_max},
                   {"mount_height", profile.mount_height},
                   {"base_radius", profile.base_radius}};
  f << j.dump(2) << "\n";
}

}  // namespace sceneforge
