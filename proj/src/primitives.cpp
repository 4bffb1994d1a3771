#include "sceneforge/primitives.hpp"

#include <map>

namespace sceneforge {

namespace {

// Closed prism over a star-shaped (from vertex 0) CCW polygon, extruded from
// z = 0 to z = h, xy-centroid shifted to the origin.
TriangleMesh make_prism(std::vector<Eigen::Vector2d> footprint, double h) {
  const int n = static_cast<int>(footprint.size());
  // Area centroid of the polygon.
  double area2 = 0.0, cx = 0.0, cy = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& p = footprint[i];
    const auto& q = footprint[(i + 1) % n];
    const double cross = p.x() * q.y() - q.x() * p.y();
    area2 += cross;
    cx += (p.x() + q.x()) * cross;
    cy += (p.y() + q.y()) * cross;
  }
  cx /= 3.0 * area2;
  cy /= 3.0 * area2;
  for (auto& p : footprint) p -= Eigen::Vector2d(cx, cy);

  TriangleMesh mesh;
  mesh.vertices.reserve(2 * n);
  for (const auto& p : footprint) mesh.vertices.emplace_back(p.x(), p.y(), 0.0);
  for (const auto& p : footprint) mesh.vertices.emplace_back(p.x(), p.y(), h);

  // Top fan (+z outward), bottom fan reversed (−z outward).
  for (int i = 1; i + 1 < n; ++i) {
    mesh.triangles.push_back({n, n + i, n + i + 1});
    mesh.triangles.push_back({0, i + 1, i});
  }
  // Side walls, outward for CCW footprints.
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    mesh.triangles.push_back({i, j, n + j});
    mesh.triangles.push_back({i, n + j, n + i});
  }
  return mesh;
}

}  // namespace

TriangleMesh make_box(double sx, double sy, double sz) {
  return make_prism({{-sx / 2, -sy / 2},
                     {sx / 2, -sy / 2},
                     {sx / 2, sy / 2},
                     {-sx / 2, sy / 2}},
                    sz);
}

TriangleMesh make_wedge(double a, double b, double h) {
  return make_prism({{0.0, 0.0}, {a, 0.0}, {0.0, b}}, h);
}

TriangleMesh make_lprism(double a, double b, double cut_a, double cut_b,
                         double h) {
  // CCW hexagon with the notch at the +x/+y corner; star-shaped from (0,0).
  return make_prism({{0.0, 0.0},
                     {a, 0.0},
                     {a, b - cut_b},
                     {a - cut_a, b - cut_b},
                     {a - cut_a, b},
                     {0.0, b}},
                    h);
}

TriangleMesh make_icosphere(double radius, int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int i, int j) {
      const auto key = std::minmax(i, j);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(verts.size());
      verts.push_back((verts[i] + verts[j]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }

  TriangleMesh mesh;
  mesh.vertices.reserve(verts.size());
  for (const Vec3& v : verts) mesh.vertices.push_back(radius * v);
  mesh.triangles = std::move(faces);
  return mesh;
}

TriangleMesh make_plane_grid(double sx, double sy, int nx, int ny,
                             std::array<uint8_t, 3> color_a,
                             std::array<uint8_t, 3> color_b) {
  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      mesh.vertices.emplace_back(-sx / 2 + sx * i / nx, -sy / 2 + sy * j / ny,
                                 0.0);
      mesh.colors.push_back((i + j) % 2 == 0 ? color_a : color_b);
    }
  }
  auto at = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      mesh.triangles.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      mesh.triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
    }
  }
  return mesh;
}

}  // namespace sceneforge
