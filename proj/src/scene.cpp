#include "sceneforge/scene.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "sceneforge/error.hpp"

namespace sceneforge {

using nlohmann::json;

namespace {

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json to_json(const RigidTransform& t) {
  return {{"rotation_wxyz", json::array({t.rotation.w(), t.rotation.x(),
                                         t.rotation.y(), t.rotation.z()})},
          {"translation", to_json(t.translation)}};
}

RigidTransform rigid_from(const json& j) {
  const auto& q = j.at("rotation_wxyz");
  RigidTransform t;
  t.rotation = Quat(q.at(0).get<double>(), q.at(1).get<double>(),
                    q.at(2).get<double>(), q.at(3).get<double>());
  t.translation = vec3_from(j.at("translation"));
  if (!t.is_unit(1e-6))
    throw ConfigError("scene: non-unit quaternion in transform");
  t.rotation.normalize();
  return t;
}

json to_json(const SimilarityTransform& t) {
  json j = to_json(t.rigid);
  j["scale"] = t.scale;
  return j;
}

SimilarityTransform similarity_from(const json& j) {
  SimilarityTransform t;
  t.rigid = rigid_from(j);
  t.scale = j.value("scale", 1.0);
  if (!(t.scale > 0)) throw ConfigError("scene: non-positive pose scale");
  return t;
}

json to_json(const PhysicalProperties& p) {
  return {{"density", p.density},
          {"static_friction", p.static_friction},
          {"dynamic_friction", p.dynamic_friction},
          {"restitution", p.restitution}};
}

PhysicalProperties properties_from(const json& j) {
  PhysicalProperties p;
  p.density = j.at("density").get<double>();
  p.static_friction = j.at("static_friction").get<double>();
  p.dynamic_friction = j.value("dynamic_friction", 0.8 * p.static_friction);
  p.restitution = j.value("restitution", 0.3);
  return p;
}

}  // namespace

void SceneConfig::validate() const {
  if (!camera.intrinsics.valid())
    throw ConfigError("scene: invalid camera intrinsics");
  if (std::abs(supported_plane.normal.norm() - 1.0) > 1e-9)
    throw ConfigError("scene: supported plane normal is not unit length");
  std::set<int> ids;
  for (const auto& obj : objects) {
    if (!ids.insert(obj.id).second)
      throw ConfigError("scene: duplicate object id " + std::to_string(obj.id));
    if (!(obj.pose.scale > 0))
      throw ConfigError("scene: object " + std::to_string(obj.id) +
                        " has non-positive scale");
  }
}

void save_scene(const std::string& path, const SceneConfig& scene) {
  scene.validate();
  json j;
  j["schema_version"] = scene.schema_version;
  j["camera"] = {{"intrinsics",
                  {{"fx", scene.camera.intrinsics.fx},
                   {"fy", scene.camera.intrinsics.fy},
                   {"cx", scene.camera.intrinsics.cx},
                   {"cy", scene.camera.intrinsics.cy},
                   {"width", scene.camera.intrinsics.width},
                   {"height", scene.camera.intrinsics.height}}},
                 {"world_from_camera", to_json(scene.camera.world_from_camera)}};
  j["supported_plane"] = {{"normal", to_json(scene.supported_plane.normal)},
                          {"offset", scene.supported_plane.offset}};
  j["background"] = {
      {"kind", scene.background.kind == BackgroundKind::mesh ? "mesh" : "plane"},
      {"mesh", scene.background.mesh_path}};
  j["objects"] = json::array();
  for (const auto& obj : scene.objects) {
    json o;
    o["id"] = obj.id;
    o["category"] = obj.category;
    o["mesh"] = obj.mesh_path;
    o["pose"] = to_json(obj.pose);
    o["properties"] = to_json(obj.properties);
    o["property_provenance"] = obj.property_provenance;
    if (obj.mass > 0) {
      o["mass"] = obj.mass;
      o["mass_from_convex_hull"] = obj.mass_from_convex_hull;
    }
    o["registration_rms"] = obj.registration_rms;
    if (!obj.provenance.empty()) o["provenance"] = obj.provenance;
    j["objects"].push_back(o);
  }
  j["robot_placements"] = json::array();
  for (const auto& rp : scene.robot_placements) {
    json p = to_json(rp.base_pose);
    p["clearance"] = rp.clearance;
    j["robot_placements"].push_back(p);
  }
  if (scene.robot_camera_transform)
    j["robot_camera_transform"] = to_json(*scene.robot_camera_transform);

  std::ofstream f(path);
  if (!f) throw InputError("cannot write scene file " + path);
  f << j.dump(2) << "\n";
}

SceneConfig load_scene(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open scene file " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw InputError("scene file " + path + ": " + e.what());
  }

  SceneConfig scene;
  scene.schema_version = j.value("schema_version", 1);
  if (scene.schema_version != 1)
    throw ConfigError("scene file " + path + ": unsupported schema_version " +
                      std::to_string(scene.schema_version));
  const json& ji = j.at("camera").at("intrinsics");
  scene.camera.intrinsics = {ji.at("fx"), ji.at("fy"), ji.at("cx"),
                             ji.at("cy"), ji.at("width"), ji.at("height")};
  scene.camera.world_from_camera = rigid_from(j.at("camera").at("world_from_camera"));
  scene.supported_plane.normal = vec3_from(j.at("supported_plane").at("normal"));
  scene.supported_plane.offset = j.at("supported_plane").at("offset");
  const std::string bk = j.at("background").at("kind");
  scene.background.kind =
      bk == "plane" ? BackgroundKind::plane_primitive : BackgroundKind::mesh;
  scene.background.mesh_path = j.at("background").value("mesh", "");
  for (const auto& o : j.value("objects", json::array())) {
    SceneObject obj;
    obj.id = o.at("id");
    obj.category = o.value("category", "");
    obj.mesh_path = o.at("mesh");
    obj.pose = similarity_from(o.at("pose"));
    obj.properties = properties_from(o.at("properties"));
    obj.property_provenance = o.value("property_provenance", "default");
    obj.mass = o.value("mass", 0.0);
    obj.mass_from_convex_hull = o.value("mass_from_convex_hull", false);
    obj.registration_rms = o.value("registration_rms", 0.0);
    if (o.contains("provenance"))
      obj.provenance =
          o["provenance"].get<std::map<std::string, std::string>>();
    scene.objects.push_back(std::move(obj));
  }
  for (const auto& p : j.value("robot_placements", json::array())) {
    RobotPlacementEntry rp;
    rp.base_pose = rigid_from(p);
    rp.clearance = p.value("clearance", 0.0);
    scene.robot_placements.push_back(rp);
  }
  if (j.contains("robot_camera_transform"))
    scene.robot_camera_transform = rigid_from(j["robot_camera_transform"]);
  scene.validate();
  return scene;
}

Intrinsics load_intrinsics(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open intrinsics file " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw InputError("intrinsics file " + path + ": " + e.what());
  }
  Intrinsics K{j.at("fx"), j.at("fy"), j.at("cx"),
               j.at("cy"), j.at("width"), j.at("height")};
  if (!K.valid())
    throw ConfigError("intrinsics file " + path + " violates fx,fy > 0 and "
                      "principal point inside the image");
  return K;
}

void save_intrinsics(const std::string& path, const Intrinsics& K) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write intrinsics file " + path);
  json j{{"fx", K.fx},     {"fy", K.fy},         {"cx", K.cx},
         {"cy", K.cy},     {"width", K.width},   {"height", K.height}};
  f << j.dump(2) << "\n";
}

}  // namespace sceneforge
