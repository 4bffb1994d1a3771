#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sceneforge/geometry.hpp"
#include "sceneforge/properties.hpp"
#include "sceneforge/transform.hpp"

namespace sceneforge {

struct SceneCamera {
  Intrinsics intrinsics;
  RigidTransform world_from_camera;
};

enum class BackgroundKind { mesh, plane_primitive };

struct SceneBackground {
  BackgroundKind kind = BackgroundKind::mesh;
  std::string mesh_path;  // relative to the scene file
};

struct SceneObject {
  int id = 0;  // matches the instance-mask label
  std::string category;
  std::string mesh_path;  // relative to the scene file
  SimilarityTransform pose;  // world_from_object
  PhysicalProperties properties;
  std::string property_provenance = "default";
  double mass = 0.0;  // kg; 0 when volume was unavailable
  bool mass_from_convex_hull = false;
  double registration_rms = 0.0;
  // quantity → measured | registered | estimated | default
  std::map<std::string, std::string> provenance;
};

struct RobotPlacementEntry {
  RigidTransform base_pose;
  double clearance = 0.0;
};

/// The recovered physical scene: camera, supported plane (z = 0 in the world
/// frame after alignment), posed objects, background geometry, and optional
/// robot placements.
struct SceneConfig {
  int schema_version = 1;
  SceneCamera camera;
  Plane supported_plane;
  std::vector<SceneObject> objects;
  SceneBackground background;
  std::vector<RobotPlacementEntry> robot_placements;
  std::optional<RigidTransform> robot_camera_transform;

  void validate() const;  // unique ids, unit normal, positive scales
};

SceneConfig load_scene(const std::string& path);
void save_scene(const std::string& path, const SceneConfig& scene);

Intrinsics load_intrinsics(const std::string& path);
void save_intrinsics(const std::string& path, const Intrinsics& K);

}  // namespace sceneforge
