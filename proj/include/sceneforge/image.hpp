#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace sceneforge {

/// Row-major float32 depth in meters. Values ≤ 0 or non-finite are invalid.
struct DepthImage {
  int width = 0, height = 0;
  std::vector<float> values;

  DepthImage() = default;
  DepthImage(int w, int h, float fill = 0.f)
      : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {}

  float& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
  float at(int x, int y) const {
    return values[static_cast<size_t>(y) * width + x];
  }
  bool valid(int x, int y) const {
    const float d = at(x, y);
    return std::isfinite(d) && d > 0.f;
  }
};

/// Row-major 8-bit RGB.
struct ColorImage {
  int width = 0, height = 0;
  std::vector<uint8_t> rgb;  // 3 bytes per pixel

  ColorImage() = default;
  ColorImage(int w, int h, uint8_t r = 0, uint8_t g = 0, uint8_t b = 0)
      : width(w), height(h), rgb(static_cast<size_t>(w) * h * 3) {
    for (size_t i = 0; i < rgb.size(); i += 3) {
      rgb[i] = r;
      rgb[i + 1] = g;
      rgb[i + 2] = b;
    }
  }

  uint8_t* px(int x, int y) { return &rgb[(static_cast<size_t>(y) * width + x) * 3]; }
  const uint8_t* px(int x, int y) const {
    return &rgb[(static_cast<size_t>(y) * width + x) * 3];
  }
};

/// Per-pixel instance labels: 0 = background, k ≥ 1 = object instance k.
struct InstanceMask {
  int width = 0, height = 0;
  std::vector<uint16_t> labels;

  InstanceMask() = default;
  InstanceMask(int w, int h, uint16_t fill = 0)
      : width(w), height(h), labels(static_cast<size_t>(w) * h, fill) {}

  uint16_t& at(int x, int y) { return labels[static_cast<size_t>(y) * width + x]; }
  uint16_t at(int x, int y) const {
    return labels[static_cast<size_t>(y) * width + x];
  }

  int max_label() const {
    uint16_t m = 0;
    for (uint16_t v : labels) m = std::max(m, v);
    return m;
  }
};

// ---- Raster file I/O -------------------------------------------------------
//
// Color:  binary PPM (P6, maxval 255), rows top-down.
// Labels: binary PGM (P5), maxval 255 → 1 byte/px, maxval 65535 → 2 bytes
//         big-endian, rows top-down.
// Depth:  either 16-bit PGM holding millimeters, or PFM ('Pf', scale -1.0 =
//         little-endian float32 meters, rows bottom-up per the PFM spec).
//         load_depth() auto-detects by magic number.

ColorImage load_color_ppm(const std::string& path);
void save_color_ppm(const std::string& path, const ColorImage& img);

InstanceMask load_mask_pgm(const std::string& path);
void save_mask_pgm(const std::string& path, const InstanceMask& mask);

DepthImage load_depth(const std::string& path);
void save_depth_pfm(const std::string& path, const DepthImage& depth);
void save_depth_pgm16(const std::string& path, const DepthImage& depth);

/// 0/255 binary mask as 8-bit PGM. Nonzero loads as true.
std::vector<uint8_t> load_binary_mask_pgm(const std::string& path, int& w, int& h);
void save_binary_mask_pgm(const std::string& path, const std::vector<uint8_t>& mask,
                          int w, int h);

}  // namespace sceneforge
