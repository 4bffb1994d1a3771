#pragma once

#include <string>
#include <vector>

#include "sceneforge/image.hpp"
#include "sceneforge/mesh.hpp"
#include "sceneforge/scene.hpp"

namespace sceneforge {

struct RenderSettings {
  int width = 640, height = 480;
  enum class Shading { flat, vertex_color, textured };
  Shading shading = Shading::vertex_color;
  enum class BackgroundPolicy { invalid_depth, far_plane };
  BackgroundPolicy background_policy = BackgroundPolicy::invalid_depth;
  double far_plane = 100.0;
  double near_clip = 0.01;
  int threads = 1;
};

/// Raw per-pixel id for "no geometry".
inline constexpr uint16_t kNoGeometry = 0xffff;

struct RenderItem {
  const TriangleMesh* mesh = nullptr;
  SimilarityTransform world_from_mesh;
  uint16_t id = 0;  // 0 = background geometry, k ≥ 1 = object instance
  std::array<uint8_t, 3> flat_color{180, 180, 180};
  const ColorImage* texture = nullptr;
};

struct RenderOutput {
  ColorImage color;
  DepthImage depth;                // camera-space Z, invalid where empty
  std::vector<uint16_t> raw_ids;   // per pixel: item id or kNoGeometry

  /// Instance labels: objects keep their id, background and empty pixels → 0.
  InstanceMask instance_mask() const;
  /// 1 where the background geometry (id 0) is the visible surface.
  std::vector<uint8_t> ground_mask() const;
};

/// Deterministic z-buffer rasterizer: perspective projection, pixel-center
/// sampling, inclusive edge coverage (barycentric ≥ 0), strict-less depth
/// test with first-drawn-wins ties in item/triangle order. Output is
/// bit-identical for any thread count (triangle binning is order-preserving
/// and tiles are disjoint).
RenderOutput render_items(const std::vector<RenderItem>& items,
                          const RigidTransform& world_from_camera,
                          const Intrinsics& K, const RenderSettings& settings);

/// Renders a scene file's geometry; meshes resolve relative to `scene_dir`.
/// `skip_objects` renders the bare background (for background depth).
RenderOutput render_scene(const SceneConfig& scene, const std::string& scene_dir,
                          const RenderSettings& settings,
                          bool skip_objects = false);

}  // namespace sceneforge
