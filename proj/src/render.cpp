#include "sceneforge/render.hpp"

#include <filesystem>

#include "sceneforge/error.hpp"
#include "sceneforge/parallel.hpp"
#include "sceneforge/primitives.hpp"

namespace fs = std::filesystem;

namespace sceneforge {

InstanceMask RenderOutput::instance_mask() const {
  InstanceMask m(depth.width, depth.height);
  for (size_t i = 0; i < raw_ids.size(); ++i)
    m.labels[i] = raw_ids[i] == kNoGeometry ? 0 : raw_ids[i];
  return m;
}

std::vector<uint8_t> RenderOutput::ground_mask() const {
  std::vector<uint8_t> g(raw_ids.size(), 0);
  for (size_t i = 0; i < raw_ids.size(); ++i)
    if (raw_ids[i] == 0) g[i] = 1;
  return g;
}

namespace {

struct ClipVertex {
  Vec3 pos;       // camera frame
  Vec3 color;     // 0..255
  Eigen::Vector2d uv;
};

ClipVertex lerp(const ClipVertex& a, const ClipVertex& b, double t) {
  return {a.pos + t * (b.pos - a.pos), a.color + t * (b.color - a.color),
          a.uv + t * (b.uv - a.uv)};
}

// Sutherland-Hodgman against the z = near plane (keep z >= near).
int clip_near(const ClipVertex in[3], double near, ClipVertex out[4]) {
  int n = 0;
  for (int i = 0; i < 3; ++i) {
    const ClipVertex& cur = in[i];
    const ClipVertex& nxt = in[(i + 1) % 3];
    const bool cur_in = cur.pos.z() >= near;
    const bool nxt_in = nxt.pos.z() >= near;
    if (cur_in) out[n++] = cur;
    if (cur_in != nxt_in) {
      const double t = (near - cur.pos.z()) / (nxt.pos.z() - cur.pos.z());
      out[n++] = lerp(cur, nxt, t);
    }
  }
  return n;
}

struct PrepTri {
  double ux[3], uy[3], z[3];
  Vec3 color[3];
  Eigen::Vector2d uv[3];
  int tex = -1;
  uint16_t id = 0;
  int x0, y0, x1, y1;  // inclusive pixel bbox
};

Vec3 sample_texture(const ColorImage& tex, double u, double v) {
  // Nearest texel, clamped; v = 0 is the bottom row (mesh convention).
  const int x = std::clamp(static_cast<int>(std::floor(u * tex.width)), 0,
                           tex.width - 1);
  const int y = std::clamp(
      static_cast<int>(std::floor((1.0 - v) * tex.height)), 0, tex.height - 1);
  const uint8_t* p = tex.px(x, y);
  return {static_cast<double>(p[0]), static_cast<double>(p[1]),
          static_cast<double>(p[2])};
}

}  // namespace

RenderOutput render_items(const std::vector<RenderItem>& items,
                          const RigidTransform& world_from_camera,
                          const Intrinsics& K, const RenderSettings& settings) {
  if (K.width != settings.width || K.height != settings.height)
    throw ConfigError("render: intrinsics dimensions disagree with settings");
  const RigidTransform camera_from_world = world_from_camera.inverse();

  // Gather textures (index per item).
  std::vector<const ColorImage*> textures;
  std::vector<int> item_tex(items.size(), -1);
  for (size_t n = 0; n < items.size(); ++n) {
    if (settings.shading == RenderSettings::Shading::textured &&
        items[n].texture && items[n].mesh->has_uvs()) {
      item_tex[n] = static_cast<int>(textures.size());
      textures.push_back(items[n].texture);
    }
  }

  // Transform, clip, project, and collect screen triangles in draw order.
  std::vector<PrepTri> tris;
  for (size_t n = 0; n < items.size(); ++n) {
    const RenderItem& item = items[n];
    if (!item.mesh) throw AssetError("render: null mesh for item id " +
                                     std::to_string(item.id));
    const TriangleMesh& mesh = *item.mesh;
    const bool use_vertex_color =
        settings.shading != RenderSettings::Shading::flat && mesh.has_colors();
    const Vec3 flat(item.flat_color[0], item.flat_color[1], item.flat_color[2]);

    // camera_from_mesh as one similarity: R_c (s·x) + t_c
    const Quat rot = camera_from_world.rotation * item.world_from_mesh.rigid.rotation;
    const Vec3 trans = camera_from_world.apply(item.world_from_mesh.rigid.translation);
    const double s = item.world_from_mesh.scale;

    for (const auto& tri : mesh.triangles) {
      ClipVertex cv[3];
      for (int k = 0; k < 3; ++k) {
        const int vi = tri[k];
        cv[k].pos = rot * (s * mesh.vertices[vi]) + trans;
        cv[k].color = use_vertex_color
                          ? Vec3(mesh.colors[vi][0], mesh.colors[vi][1],
                                 mesh.colors[vi][2])
                          : flat;
        cv[k].uv = mesh.has_uvs() ? mesh.uvs[vi] : Eigen::Vector2d::Zero();
      }
      ClipVertex poly[4];
      const int nv = clip_near(cv, settings.near_clip, poly);
      for (int k = 1; k + 1 < nv; ++k) {
        const ClipVertex* v[3] = {&poly[0], &poly[k], &poly[k + 1]};
        PrepTri pt;
        double min_u = 1e300, max_u = -1e300, min_v = 1e300, max_v = -1e300;
        for (int m = 0; m < 3; ++m) {
          const double z = v[m]->pos.z();
          pt.z[m] = z;
          pt.ux[m] = K.fx * v[m]->pos.x() / z + K.cx;
          pt.uy[m] = K.fy * v[m]->pos.y() / z + K.cy;
          pt.color[m] = v[m]->color;
          pt.uv[m] = v[m]->uv;
          min_u = std::min(min_u, pt.ux[m]);
          max_u = std::max(max_u, pt.ux[m]);
          min_v = std::min(min_v, pt.uy[m]);
          max_v = std::max(max_v, pt.uy[m]);
        }
        // Pixel centers are at integer + 0.5.
        pt.x0 = std::max(0, static_cast<int>(std::ceil(min_u - 0.5)));
        pt.x1 = std::min(settings.width - 1, static_cast<int>(std::floor(max_u - 0.5)));
        pt.y0 = std::max(0, static_cast<int>(std::ceil(min_v - 0.5)));
        pt.y1 = std::min(settings.height - 1, static_cast<int>(std::floor(max_v - 0.5)));
        if (pt.x0 > pt.x1 || pt.y0 > pt.y1) continue;
        pt.tex = item_tex[n];
        pt.id = item.id;
        tris.push_back(pt);
      }
    }
  }

  // Bin triangles per tile, preserving draw order within each bin.
  constexpr int kTile = 64;
  const int tiles_x = (settings.width + kTile - 1) / kTile;
  const int tiles_y = (settings.height + kTile - 1) / kTile;
  std::vector<std::vector<int>> bins(static_cast<size_t>(tiles_x) * tiles_y);
  for (size_t t = 0; t < tris.size(); ++t) {
    const PrepTri& pt = tris[t];
    for (int ty = pt.y0 / kTile; ty <= pt.y1 / kTile; ++ty)
      for (int tx = pt.x0 / kTile; tx <= pt.x1 / kTile; ++tx)
        bins[static_cast<size_t>(ty) * tiles_x + tx].push_back(static_cast<int>(t));
  }

  RenderOutput out;
  out.color = ColorImage(settings.width, settings.height);
  out.depth = DepthImage(settings.width, settings.height, 0.f);
  out.raw_ids.assign(static_cast<size_t>(settings.width) * settings.height,
                     kNoGeometry);
  std::vector<double> zbuf(out.raw_ids.size(),
                           std::numeric_limits<double>::infinity());

  parallel_for(0, tiles_x * tiles_y, settings.threads, [&](int tile) {
    const int tx = tile % tiles_x, ty = tile / tiles_x;
    const int px0 = tx * kTile, px1 = std::min(settings.width - 1, px0 + kTile - 1);
    const int py0 = ty * kTile, py1 = std::min(settings.height - 1, py0 + kTile - 1);
    for (int ti : bins[tile]) {
      const PrepTri& pt = tris[ti];
      const double ax = pt.ux[0], ay = pt.uy[0];
      const double bx = pt.ux[1], by = pt.uy[1];
      const double cx = pt.ux[2], cy = pt.uy[2];
      const double area = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
      if (area == 0.0) continue;
      const double inv_area = 1.0 / area;
      const int rx0 = std::max(pt.x0, px0), rx1 = std::min(pt.x1, px1);
      const int ry0 = std::max(pt.y0, py0), ry1 = std::min(pt.y1, py1);
      for (int y = ry0; y <= ry1; ++y) {
        const double sy = y + 0.5;
        for (int x = rx0; x <= rx1; ++x) {
          const double sx = x + 0.5;
          const double w0 = ((cx - bx) * (sy - by) - (cy - by) * (sx - bx)) * inv_area;
          const double w1 = ((ax - cx) * (sy - cy) - (ay - cy) * (sx - cx)) * inv_area;
          const double w2 = 1.0 - w0 - w1;
          if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
          // Perspective-correct: 1/z is affine in screen space.
          const double inv_z = w0 / pt.z[0] + w1 / pt.z[1] + w2 / pt.z[2];
          const double z = 1.0 / inv_z;
          const size_t idx = static_cast<size_t>(y) * settings.width + x;
          if (z >= zbuf[idx]) continue;
          zbuf[idx] = z;
          out.raw_ids[idx] = pt.id;
          out.depth.values[idx] = static_cast<float>(z);
          Vec3 rgb;
          if (pt.tex >= 0) {
            const double tu =
                (w0 * pt.uv[0].x() / pt.z[0] + w1 * pt.uv[1].x() / pt.z[1] +
                 w2 * pt.uv[2].x() / pt.z[2]) * z;
            const double tv =
                (w0 * pt.uv[0].y() / pt.z[0] + w1 * pt.uv[1].y() / pt.z[1] +
                 w2 * pt.uv[2].y() / pt.z[2]) * z;
            rgb = sample_texture(*textures[pt.tex], tu, tv);
          } else {
            rgb = (w0 * pt.color[0] / pt.z[0] + w1 * pt.color[1] / pt.z[1] +
                   w2 * pt.color[2] / pt.z[2]) * z;
          }
          uint8_t* px = &out.color.rgb[idx * 3];
          px[0] = static_cast<uint8_t>(std::clamp(rgb.x() + 0.5, 0.0, 255.0));
          px[1] = static_cast<uint8_t>(std::clamp(rgb.y() + 0.5, 0.0, 255.0));
          px[2] = static_cast<uint8_t>(std::clamp(rgb.z() + 0.5, 0.0, 255.0));
        }
      }
    }
  });

  if (settings.background_policy == RenderSettings::BackgroundPolicy::far_plane) {
    for (size_t i = 0; i < out.raw_ids.size(); ++i)
      if (out.raw_ids[i] == kNoGeometry)
        out.depth.values[i] = static_cast<float>(settings.far_plane);
  }
  return out;
}

RenderOutput render_scene(const SceneConfig& scene, const std::string& scene_dir,
                          const RenderSettings& settings, bool skip_objects) {
  // Load geometry first, then bind items (mesh pointers must outlive reallocs).
  std::vector<TriangleMesh> meshes;
  std::vector<std::pair<SimilarityTransform, uint16_t>> placements;

  if (scene.background.kind == BackgroundKind::plane_primitive) {
    // Analytic supported plane as a large finite grid about the origin.
    meshes.push_back(
        make_plane_grid(10.0, 10.0, 4, 4, {168, 168, 168}, {168, 168, 168}));
    placements.emplace_back(SimilarityTransform::identity(), uint16_t{0});
  } else if (!scene.background.mesh_path.empty()) {
    const fs::path mesh_path = fs::path(scene_dir) / scene.background.mesh_path;
    try {
      meshes.push_back(load_mesh(mesh_path.string()));
    } catch (const Error& e) {
      throw AssetError("background mesh: " + std::string(e.what()));
    }
    placements.emplace_back(SimilarityTransform::identity(), uint16_t{0});
  }

  if (!skip_objects) {
    for (const auto& obj : scene.objects) {
      const fs::path mesh_path = fs::path(scene_dir) / obj.mesh_path;
      try {
        meshes.push_back(load_mesh(mesh_path.string()));
      } catch (const Error& e) {
        throw AssetError("object " + std::to_string(obj.id) + ": " +
                         std::string(e.what()));
      }
      placements.emplace_back(obj.pose, static_cast<uint16_t>(obj.id));
    }
  }

  std::vector<RenderItem> items(meshes.size());
  for (size_t i = 0; i < meshes.size(); ++i) {
    items[i].mesh = &meshes[i];
    items[i].world_from_mesh = placements[i].first;
    items[i].id = placements[i].second;
  }
  return render_items(items, scene.camera.world_from_camera,
                      scene.camera.intrinsics, settings);
}

}  // namespace sceneforge
