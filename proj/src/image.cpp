#include "sceneforge/image.hpp"

#include <cstring>
#include <fstream>

#include "sceneforge/error.hpp"

namespace sceneforge {

namespace {

// Reads one whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
  std::string tok;
  for (;;) {
    int c = in.get();
    if (c == EOF) break;
    if (c == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

struct PnmHeader {
  std::string magic;
  int width = 0, height = 0;
  double maxval = 0;  // PFM stores the scale here
};

PnmHeader read_pnm_header(std::istream& in, const std::string& path) {
  PnmHeader h;
  h.magic = next_token(in);
  if (h.magic != "P5" && h.magic != "P6" && h.magic != "Pf")
    throw InputError(path + ": unsupported raster magic '" + h.magic + "'");
  h.width = std::stoi(next_token(in));
  h.height = std::stoi(next_token(in));
  h.maxval = std::stod(next_token(in));
  if (h.width <= 0 || h.height <= 0)
    throw InputError(path + ": bad raster dimensions");
  return h;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot open " + path);
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  return f;
}

}  // namespace

ColorImage load_color_ppm(const std::string& path) {
  auto f = open_in(path);
  const PnmHeader h = read_pnm_header(f, path);
  if (h.magic != "P6" || h.maxval != 255)
    throw InputError(path + ": expected binary PPM with maxval 255");
  ColorImage img(h.width, h.height);
  f.read(reinterpret_cast<char*>(img.rgb.data()),
         static_cast<std::streamsize>(img.rgb.size()));
  if (!f) throw InputError(path + ": truncated PPM payload");
  return img;
}

void save_color_ppm(const std::string& path, const ColorImage& img) {
  auto f = open_out(path);
  f << "P6\n" << img.width << " " << img.height << "\n255\n";
  f.write(reinterpret_cast<const char*>(img.rgb.data()),
          static_cast<std::streamsize>(img.rgb.size()));
}

InstanceMask load_mask_pgm(const std::string& path) {
  auto f = open_in(path);
  const PnmHeader h = read_pnm_header(f, path);
  if (h.magic != "P5") throw InputError(path + ": expected PGM mask");
  InstanceMask mask(h.width, h.height);
  const size_t n = mask.labels.size();
  if (h.maxval <= 255) {
    std::vector<uint8_t> buf(n);
    f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
    if (!f) throw InputError(path + ": truncated PGM payload");
    for (size_t i = 0; i < n; ++i) mask.labels[i] = buf[i];
  } else {
    std::vector<uint8_t> buf(n * 2);
    f.read(reinterpret_cast<char*>(buf.data()),
           static_cast<std::streamsize>(buf.size()));
    if (!f) throw InputError(path + ": truncated PGM payload");
    for (size_t i = 0; i < n; ++i)
      mask.labels[i] = static_cast<uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
  }
  return mask;
}

void save_mask_pgm(const std::string& path, const InstanceMask& mask) {
  auto f = open_out(path);
  const int maxlab = mask.max_label();
  const size_t n = mask.labels.size();
  if (maxlab <= 255) {
    f << "P5\n" << mask.width << " " << mask.height << "\n255\n";
    std::vector<uint8_t> buf(n);
    for (size_t i = 0; i < n; ++i) buf[i] = static_cast<uint8_t>(mask.labels[i]);
    f.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(n));
  } else {
    f << "P5\n" << mask.width << " " << mask.height << "\n65535\n";
    std::vector<uint8_t> buf(n * 2);
    for (size_t i = 0; i < n; ++i) {
      buf[2 * i] = static_cast<uint8_t>(mask.labels[i] >> 8);
      buf[2 * i + 1] = static_cast<uint8_t>(mask.labels[i] & 0xff);
    }
    f.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  }
}

DepthImage load_depth(const std::string& path) {
  auto f = open_in(path);
  const PnmHeader h = read_pnm_header(f, path);
  DepthImage depth(h.width, h.height);
  const size_t n = depth.values.size();
  if (h.magic == "P5") {
    // 16-bit millimeter raster (big-endian per PGM).
    if (h.maxval <= 255)
      throw InputError(path + ": depth PGM must be 16-bit (millimeters)");
    std::vector<uint8_t> buf(n * 2);
    f.read(reinterpret_cast<char*>(buf.data()),
           static_cast<std::streamsize>(buf.size()));
    if (!f) throw InputError(path + ": truncated depth payload");
    for (size_t i = 0; i < n; ++i) {
      const uint16_t mm = static_cast<uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
      depth.values[i] = static_cast<float>(mm) / 1000.f;
    }
  } else if (h.magic == "Pf") {
    if (h.maxval > 0)
      throw InputError(path + ": big-endian PFM not supported");
    const size_t row_bytes = static_cast<size_t>(h.width) * sizeof(float);
    std::vector<char> row(row_bytes);
    // PFM rows are stored bottom-up.
    for (int y = h.height - 1; y >= 0; --y) {
      f.read(row.data(), static_cast<std::streamsize>(row_bytes));
      if (!f) throw InputError(path + ": truncated PFM payload");
      std::memcpy(&depth.values[static_cast<size_t>(y) * h.width], row.data(),
                  row_bytes);
    }
  } else {
    throw InputError(path + ": not a depth raster");
  }
  return depth;
}

void save_depth_pfm(const std::string& path, const DepthImage& depth) {
  auto f = open_out(path);
  f << "Pf\n" << depth.width << " " << depth.height << "\n-1.0\n";
  const size_t row_bytes = static_cast<size_t>(depth.width) * sizeof(float);
  for (int y = depth.height - 1; y >= 0; --y)
    f.write(reinterpret_cast<const char*>(
                &depth.values[static_cast<size_t>(y) * depth.width]),
            static_cast<std::streamsize>(row_bytes));
}

void save_depth_pgm16(const std::string& path, const DepthImage& depth) {
  auto f = open_out(path);
  f << "P5\n" << depth.width << " " << depth.height << "\n65535\n";
  const size_t n = depth.values.size();
  std::vector<uint8_t> buf(n * 2);
  for (size_t i = 0; i < n; ++i) {
    const float d = depth.values[i];
    uint16_t mm = 0;
    if (std::isfinite(d) && d > 0.f)
      mm = static_cast<uint16_t>(
          std::min(65535.0, std::floor(static_cast<double>(d) * 1000.0 + 0.5)));
    buf[2 * i] = static_cast<uint8_t>(mm >> 8);
    buf[2 * i + 1] = static_cast<uint8_t>(mm & 0xff);
  }
  f.write(reinterpret_cast<const char*>(buf.data()),
          static_cast<std::streamsize>(buf.size()));
}

std::vector<uint8_t> load_binary_mask_pgm(const std::string& path, int& w, int& h) {
  const InstanceMask m = load_mask_pgm(path);
  w = m.width;
  h = m.height;
  std::vector<uint8_t> out(m.labels.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = m.labels[i] ? 1 : 0;
  return out;
}

void save_binary_mask_pgm(const std::string& path, const std::vector<uint8_t>& mask,
                          int w, int h) {
  auto f = open_out(path);
  f << "P5\n" << w << " " << h << "\n255\n";
  std::vector<uint8_t> buf(mask.size());
  for (size_t i = 0; i < mask.size(); ++i) buf[i] = mask[i] ? 255 : 0;
  f.write(reinterpret_cast<const char*>(buf.data()),
          static_cast<std::streamsize>(buf.size()));
}

}  // namespace sceneforge
