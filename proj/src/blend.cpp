#include "sceneforge/blend.hpp"

#include <filesystem>
#include <fstream>

#include "sceneforge/error.hpp"
#include "sceneforge/parallel.hpp"

namespace fs = std::filesystem;

namespace sceneforge {

namespace {

void check_dims(int w, int h, int w2, int h2, const char* what) {
  if (w != w2 || h != h2)
    throw ConfigError(std::string("blend: dimension mismatch (") + what + ")");
}

bool depth_valid(float d) { return std::isfinite(d) && d > 0.f; }

}  // namespace

std::vector<uint8_t> blend_mask(const DepthImage& rendered,
                                const DepthImage& background, double epsilon) {
  check_dims(rendered.width, rendered.height, background.width,
             background.height, "rendered vs background depth");
  if (epsilon < 0.0) throw ConfigError("blend: epsilon must be >= 0");
  const size_t n = rendered.values.size();
  std::vector<uint8_t> mask(n, 0);
  for (size_t i = 0; i < n; ++i) {
    const float dt = rendered.values[i];
    const float db = background.values[i];
    if (!depth_valid(dt)) continue;  // no rendered geometry → background
    if (!depth_valid(db)) {
      mask[i] = 1;  // background treated as infinitely far
      continue;
    }
    mask[i] =
        static_cast<double>(dt) < static_cast<double>(db) - epsilon ? 1 : 0;
  }
  return mask;
}

ColorImage blend_frame(const ColorImage& rendered_color,
                       const DepthImage& rendered_depth,
                       const ColorImage& background_color,
                       const DepthImage& background_depth,
                       const BlendConfig& cfg) {
  check_dims(rendered_color.width, rendered_color.height,
             background_color.width, background_color.height,
             "rendered vs background color");
  check_dims(rendered_color.width, rendered_color.height, rendered_depth.width,
             rendered_depth.height, "color vs depth");
  const std::vector<uint8_t> mask =
      blend_mask(rendered_depth, background_depth, cfg.epsilon);

  ColorImage out(rendered_color.width, rendered_color.height);
  const int h = out.height;
  parallel_for(0, h, cfg.threads, [&](int y) {
    const size_t row = static_cast<size_t>(y) * out.width;
    for (int x = 0; x < out.width; ++x) {
      const size_t i = row + x;
      const uint8_t* src =
          mask[i] ? &rendered_color.rgb[i * 3] : &background_color.rgb[i * 3];
      out.rgb[i * 3] = src[0];
      out.rgb[i * 3 + 1] = src[1];
      out.rgb[i * 3 + 2] = src[2];
    }
  });
  return out;
}

std::vector<BlendedFrame> blend_sequence(const FrameSequence& seq,
                                         const ColorImage& background_color,
                                         const DepthImage& background_depth,
                                         const BlendConfig& cfg) {
  std::vector<BlendedFrame> out(seq.frames.size());
  for (size_t t = 0; t < seq.frames.size(); ++t) {
    const Frame& f = seq.frames[t];
    try {
      out[t].color = blend_frame(f.color, f.depth, background_color,
                                 background_depth, cfg);
      if (cfg.export_masks)
        out[t].mask = blend_mask(f.depth, background_depth, cfg.epsilon);
      out[t].action_payload = f.action_payload;
    } catch (const Error& e) {
      throw ConfigError("frame " + std::to_string(t) + ": " + e.what());
    }
  }
  return out;
}

namespace {

std::string frame_stem(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", index);
  return buf;
}

}  // namespace

FrameSequence load_frame_sequence(const std::string& dir) {
  FrameSequence seq;
  for (int index = 0;; ++index) {
    const fs::path color = fs::path(dir) / (frame_stem(index) + ".color.ppm");
    const fs::path depth = fs::path(dir) / (frame_stem(index) + ".depth.pfm");
    if (!fs::exists(color) || !fs::exists(depth)) {
      if (index == 0)
        throw InputError("no frames found under " + dir +
                         " (expected 000000.color.ppm / 000000.depth.pfm)");
      break;
    }
    Frame f;
    f.color = load_color_ppm(color.string());
    f.depth = load_depth(depth.string());
    const fs::path action = fs::path(dir) / (frame_stem(index) + ".action.bin");
    if (fs::exists(action)) {
      std::ifstream a(action, std::ios::binary);
      f.action_payload.assign(std::istreambuf_iterator<char>(a),
                              std::istreambuf_iterator<char>());
    }
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

void save_blended_sequence(const std::string& dir,
                           const std::vector<BlendedFrame>& frames, int width,
                           int height) {
  fs::create_directories(dir);
  for (size_t t = 0; t < frames.size(); ++t) {
    const std::string stem = frame_stem(static_cast<int>(t));
    save_color_ppm((fs::path(dir) / (stem + ".blend.ppm")).string(),
                   frames[t].color);
    if (!frames[t].mask.empty())
      save_binary_mask_pgm((fs::path(dir) / (stem + ".mask.pgm")).string(),
                           frames[t].mask, width, height);
    if (!frames[t].action_payload.empty()) {
      std::ofstream a(fs::path(dir) / (stem + ".action.bin"), std::ios::binary);
      a.write(reinterpret_cast<const char*>(frames[t].action_payload.data()),
              static_cast<std::streamsize>(frames[t].action_payload.size()));
    }
  }
}

}  // namespace sceneforge
