#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sceneforge/image.hpp"

namespace sceneforge {

struct BlendConfig {
  double epsilon = 0.005;  // meters
  bool export_masks = false;
  int threads = 1;
};

/// One rendered frame paired with an opaque action payload.
struct Frame {
  ColorImage color;
  DepthImage depth;
  std::vector<uint8_t> action_payload;
};

struct FrameSequence {
  std::vector<Frame> frames;
};

/// The z-buffer mask: 1 where rendered depth is strictly closer than
/// background depth minus epsilon. Invalid rendered depth counts as +∞
/// (mask 0); invalid background depth counts as +∞ (mask 1 wherever the
/// rendered depth is valid).
std::vector<uint8_t> blend_mask(const DepthImage& rendered,
                                const DepthImage& background, double epsilon);

/// Per-pixel selection: mask ? rendered color : background color. Output
/// bytes always come verbatim from one of the two inputs.
ColorImage blend_frame(const ColorImage& rendered_color,
                       const DepthImage& rendered_depth,
                       const ColorImage& background_color,
                       const DepthImage& background_depth,
                       const BlendConfig& cfg);

struct BlendedFrame {
  ColorImage color;
  std::vector<uint8_t> action_payload;
  std::vector<uint8_t> mask;  // filled when cfg.export_masks
};

/// Blends every frame against the shared background pair; action payloads
/// pass through untouched.
std::vector<BlendedFrame> blend_sequence(const FrameSequence& seq,
                                         const ColorImage& background_color,
                                         const DepthImage& background_depth,
                                         const BlendConfig& cfg);

// Frame-directory layout: <index> is a zero-padded 6-digit frame number.
//   <index>.color.ppm   8-bit RGB rendered frame
//   <index>.depth.pfm   float32 rendered depth, meters
//   <index>.action.bin  optional opaque action payload
// Outputs mirror the layout with <index>.blend.ppm (+ <index>.mask.pgm).
FrameSequence load_frame_sequence(const std::string& dir);
void save_blended_sequence(const std::string& dir,
                           const std::vector<BlendedFrame>& frames,
                           int width, int height);

}  // namespace sceneforge
