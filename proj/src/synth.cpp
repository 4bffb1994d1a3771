#include "sceneforge/synth.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "sceneforge/error.hpp"
#include "sceneforge/primitives.hpp"
#include "sceneforge/rng.hpp"

namespace fs = std::filesystem;

namespace sceneforge {

namespace {

// Camera pose looking from `eye` toward `target`, +X right, +Y down,
// +Z forward, optional roll about the optical axis.
RigidTransform look_at(const Vec3& eye, const Vec3& target, double roll) {
  const Vec3 z = (target - eye).normalized();
  Vec3 x = z.cross(Vec3::UnitZ());
  if (x.norm() < 1e-9) x = Vec3::UnitX();  // straight-down camera
  x.normalize();
  const Vec3 y = z.cross(x);
  Eigen::Matrix3d r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  Quat q(r);
  if (roll != 0.0) q = q * Quat(Eigen::AngleAxisd(roll, Vec3::UnitZ()));
  return {q.normalized(), eye};
}

void shade_by_height(TriangleMesh& mesh, std::array<uint8_t, 3> base) {
  const Aabb box = mesh.aabb();
  const double z0 = box.min.z();
  const double dz = std::max(1e-9, box.max.z() - z0);
  mesh.colors.resize(mesh.vertices.size());
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    const double f = 0.6 + 0.4 * (mesh.vertices[i].z() - z0) / dz;
    for (int c = 0; c < 3; ++c)
      mesh.colors[i][c] = static_cast<uint8_t>(std::clamp(base[c] * f, 0.0, 255.0));
  }
}

SimilarityTransform object_pose(double x, double y, double yaw, double scale) {
  return {{Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ())), Vec3(x, y, 0.0)},
          scale};
}

struct ObjectSpec {
  TriangleMesh canonical;  // saved to disk; κ-scaled copy of the metric shape
  SimilarityTransform pose;
  std::string category;
};

// Builds the canonical mesh as a κ-scaled copy of the metric-scale shape;
// the ground-truth pose then carries scale 1/κ, which recovery must find.
ObjectSpec make_object(TriangleMesh metric_shape, std::array<uint8_t, 3> color,
                       double kappa, double x, double y, double yaw,
                       const std::string& category) {
  ObjectSpec spec;
  spec.canonical = std::move(metric_shape);
  for (Vec3& v : spec.canonical.vertices) v *= kappa;
  shade_by_height(spec.canonical, color);
  spec.pose = object_pose(x, y, yaw, 1.0 / kappa);
  spec.category = category;
  return spec;
}

}  // namespace

SynthScene synth_scene(const std::string& preset, uint64_t seed) {
  SynthScene out;
  Rng rng(derive_seed(seed, 0xD15C));

  out.settings.width = 320;
  out.settings.height = 240;
  out.settings.shading = RenderSettings::Shading::vertex_color;

  Intrinsics K;
  K.fx = K.fy = 260.0;
  K.cx = 160.0;
  K.cy = 120.0;
  K.width = 320;
  K.height = 240;

  std::vector<ObjectSpec> objects;
  double roll = 0.0;
  Vec3 eye(0.0, -0.34, 0.46), target(0.0, 0.05, 0.0);

  auto jitter = [&](double r) { return rng.uniform(-r, r); };

  if (preset == "tabletop-basic" || preset == "tabletop-tilted") {
    if (preset == "tabletop-tilted") roll = 15.0 * M_PI / 180.0;
    objects.push_back(make_object(make_wedge(0.11, 0.075, 0.032),
                                  {205, 150, 60}, 2.2,
                                  0.05 + jitter(0.01), -0.04 + jitter(0.01),
                                  0.45 + jitter(0.15), "cutting board"));
    objects.push_back(make_object(make_lprism(0.095, 0.07, 0.05, 0.035, 0.026),
                                  {90, 160, 205}, 0.6,
                                  -0.09 + jitter(0.01), 0.05 + jitter(0.01),
                                  -0.7 + jitter(0.15), "block"));
  } else if (preset == "cluttered") {
    eye = Vec3(0.05, -0.40, 0.55);
    const std::array<std::array<uint8_t, 3>, 4> palette{
        {{205, 150, 60}, {90, 160, 205}, {120, 195, 110}, {200, 105, 150}}};
    std::vector<TriangleMesh> shapes;
    shapes.push_back(make_wedge(0.10, 0.07, 0.030));
    shapes.push_back(make_lprism(0.09, 0.065, 0.045, 0.032, 0.025));
    shapes.push_back(make_box(0.055, 0.042, 0.036));
    shapes.push_back(make_wedge(0.075, 0.055, 0.024));
    const double kappas[4] = {2.2, 0.6, 1.4, 3.1};
    const char* cats[4] = {"cutting board", "block", "box", "cheese"};
    std::vector<Aabb> placed;
    for (int i = 0; i < 4; ++i) {
      // Rejection placement: keep object AABBs separated.
      for (int attempt = 0; attempt < 200; ++attempt) {
        const double x = rng.uniform(-0.16, 0.16);
        const double y = rng.uniform(-0.10, 0.12);
        const double yaw = rng.uniform(0.0, 2.0 * M_PI);
        ObjectSpec spec = make_object(shapes[i], palette[i], kappas[i], x, y,
                                      yaw, cats[i]);
        Aabb box;
        for (const Vec3& v : spec.canonical.vertices)
          box.expand(spec.pose.apply(v));
        bool clash = false;
        for (const Aabb& other : placed)
          if (!(box.max.x() < other.min.x() - 0.015 ||
                other.max.x() < box.min.x() - 0.015 ||
                box.max.y() < other.min.y() - 0.015 ||
                other.max.y() < box.min.y() - 0.015))
            clash = true;
        if (clash) continue;
        placed.push_back(box);
        objects.push_back(std::move(spec));
        break;
      }
    }
    if (objects.size() != 4)
      throw DegenerateInputError("synth_scene: cluttered placement failed");
  } else {
    throw ConfigError("synth_scene: unknown preset '" + preset +
                      "' (expected tabletop-basic, tabletop-tilted, cluttered)");
  }

  out.background_mesh =
      make_plane_grid(2.4, 1.8, 24, 18, {96, 104, 118}, {148, 154, 164});

  out.scene.schema_version = 1;
  out.scene.camera.intrinsics = K;
  out.scene.camera.world_from_camera = look_at(eye, target, roll);
  out.scene.supported_plane = Plane{Vec3::UnitZ(), 0.0};
  out.scene.background.kind = BackgroundKind::mesh;
  out.scene.background.mesh_path = "background.ply";

  std::vector<RenderItem> items;
  items.reserve(objects.size() + 1);
  RenderItem bg;
  bg.mesh = &out.background_mesh;
  bg.world_from_mesh = SimilarityTransform::identity();
  bg.id = 0;
  items.push_back(bg);

  for (size_t i = 0; i < objects.size(); ++i) {
    SceneObject obj;
    obj.id = static_cast<int>(i) + 1;
    obj.category = objects[i].category;
    obj.mesh_path = "meshes/object_" + std::to_string(obj.id) + ".ply";
    obj.pose = objects[i].pose;
    const auto props = estimate_properties(obj.category);
    obj.properties = props.properties;
    obj.property_provenance = to_string(props.provenance);
    out.scene.objects.push_back(obj);
    out.object_meshes.push_back(std::move(objects[i].canonical));

    RenderItem item;
    item.mesh = &out.object_meshes.back();
    item.world_from_mesh = obj.pose;
    item.id = static_cast<uint16_t>(obj.id);
    items.push_back(item);
  }
  // object_meshes reallocation safety: rebind.
  for (size_t i = 0; i < out.object_meshes.size(); ++i)
    items[i + 1].mesh = &out.object_meshes[i];

  const RenderOutput rendered =
      render_items(items, out.scene.camera.world_from_camera, K, out.settings);
  out.color = rendered.color;
  out.depth = rendered.depth;
  out.mask = rendered.instance_mask();
  out.ground = rendered.ground_mask();
  return out;
}

void save_synth(const SynthScene& synth, const std::string& dir) {
  fs::create_directories(fs::path(dir) / "meshes");
  save_color_ppm((fs::path(dir) / "color.ppm").string(), synth.color);
  save_depth_pfm((fs::path(dir) / "depth.pfm").string(), synth.depth);
  save_mask_pgm((fs::path(dir) / "mask.pgm").string(), synth.mask);
  save_binary_mask_pgm((fs::path(dir) / "ground.pgm").string(), synth.ground,
                       synth.mask.width, synth.mask.height);
  save_intrinsics((fs::path(dir) / "intrinsics.json").string(),
                  synth.scene.camera.intrinsics);
  save_mesh_ply((fs::path(dir) / "background.ply").string(),
                synth.background_mesh);
  for (size_t i = 0; i < synth.object_meshes.size(); ++i)
    save_mesh_ply((fs::path(dir) / synth.scene.objects[i].mesh_path).string(),
                  synth.object_meshes[i]);
  save_scene((fs::path(dir) / "gt_scene.json").string(), synth.scene);

  nlohmann::json cfg{
      {"image", "color.ppm"},           {"depth", "depth.pfm"},
      {"intrinsics", "intrinsics.json"}, {"mask", "mask.pgm"},
      {"ground_mask", "ground.pgm"},    {"mesh_dir", "meshes"},
      {"output_dir", "out"},            {"seed", 1}};
  nlohmann::json cats;
  for (const auto& obj : synth.scene.objects)
    cats[std::to_string(obj.id)] = obj.category;
  cfg["categories"] = cats;
  std::ofstream f(fs::path(dir) / "config.json");
  f << cfg.dump(2) << "\n";
}

}  // namespace sceneforge
