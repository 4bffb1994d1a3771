#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sceneforge/render.hpp"

namespace sceneforge {

/// Ground-truth fixture: a generated scene plus its rendered observations,
/// exactly what the recovery pipeline consumes in round-trip tests.
struct SynthScene {
  SceneConfig scene;  // ground truth, world frame (plane z = 0)
  std::vector<TriangleMesh> object_meshes;  // canonical frames, id order
  TriangleMesh background_mesh;             // world frame
  ColorImage color;
  DepthImage depth;
  InstanceMask mask;
  std::vector<uint8_t> ground;  // 1 where the supported plane is visible
  RenderSettings settings;
};

/// Presets: "tabletop-basic", "tabletop-tilted" (camera rolled 15° about its
/// optical axis), "cluttered" (4 seeded non-overlapping objects). Seed
/// jitters object placement deterministically.
SynthScene synth_scene(const std::string& preset, uint64_t seed);

/// Writes the fixture as pipeline inputs: color.ppm, depth.pfm, mask.pgm,
/// ground.pgm, intrinsics.json, meshes/object_<id>.ply (canonical),
/// background.ply (world frame), gt_scene.json, and a ready config.json.
void save_synth(const SynthScene& synth, const std::string& dir);

}  // namespace sceneforge
