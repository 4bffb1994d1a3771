#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sceneforge/geometry.hpp"

namespace sceneforge {

/// Reachable-workspace shell approximation: the robot can manipulate targets
/// whose distance from the shoulder point (base + mount_height·ẑ) lies in
/// [r_min, r_max].
struct RobotProfile {
  double r_min = 0.25;
  double r_max = 0.85;
  double mount_height = 0.30;
  double base_radius = 0.12;
  std::string name = "arm";
};

struct PlacementCandidate {
  RigidTransform base_pose;  // on z = 0, yaw facing the objects' center
  double clearance = 0.0;    // smallest margin across all constraints
};

struct PlacementConfig {
  int n_samples = 512;
  double margin = 0.05;  // AABB inflation for collision checks, meters
  uint64_t seed = 0;
};

/// Samples base positions on an annulus around the combined object AABB
/// center (stratified in angle and radius), keeping candidates whose shell
/// covers every object AABB and whose footprint stays clear of the scene
/// cross-section and the inflated object boxes. Sorted by descending
/// clearance. Throws NoPlacementError when nothing qualifies.
std::vector<PlacementCandidate> sample_placements(
    const std::vector<Aabb>& objects_aabbs, const Aabb& scene_aabb,
    const RobotProfile& profile, const PlacementConfig& cfg);

struct PlacementReport {
  bool ok = false;
  double coverage_margin = 0.0;   // min over objects of shell slack
  double collision_margin = 0.0;  // footprint / object-box slack
};

/// Independent from-scratch re-check of both predicates for one candidate.
PlacementReport verify_placement(const PlacementCandidate& candidate,
                                 const std::vector<Aabb>& objects_aabbs,
                                 const Aabb& scene_aabb,
                                 const RobotProfile& profile,
                                 double margin = 0.05);

RobotProfile load_robot_profile(const std::string& path);
void save_robot_profile(const std::string& path, const RobotProfile& profile);

}  // namespace sceneforge
