#include "sceneforge/mesh.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "sceneforge/error.hpp"

namespace sceneforge {

double TriangleMesh::surface_area() const {
  double a = 0.0;
  for (size_t t = 0; t < triangles.size(); ++t)
    a += triangle_area(static_cast<int>(t));
  return a;
}

Aabb TriangleMesh::aabb() const {
  Aabb box;
  for (const Vec3& v : vertices) box.expand(v);
  return box;
}

void TriangleMesh::clean() {
  const int nv = static_cast<int>(vertices.size());
  std::vector<std::array<int, 3>> kept;
  kept.reserve(triangles.size());
  for (const auto& tri : triangles) {
    if (tri[0] < 0 || tri[0] >= nv || tri[1] < 0 || tri[1] >= nv ||
        tri[2] < 0 || tri[2] >= nv)
      throw AssetError("mesh triangle references vertex out of range");
    const Vec3 e1 = vertices[tri[1]] - vertices[tri[0]];
    const Vec3 e2 = vertices[tri[2]] - vertices[tri[0]];
    if (0.5 * e1.cross(e2).norm() > 1e-12) kept.push_back(tri);
  }
  triangles = std::move(kept);
}

TriangleMesh TriangleMesh::transformed(const SimilarityTransform& t) const {
  TriangleMesh out = *this;
  for (Vec3& v : out.vertices) v = t.apply(v);
  return out;
}

// ---- OBJ -------------------------------------------------------------------

namespace {

struct ObjKey {
  int v, vt;
  bool operator<(const ObjKey& o) const {
    return v != o.v ? v < o.v : vt < o.vt;
  }
};

int obj_index(const std::string& tok, int count, const std::string& path) {
  // OBJ indices are 1-based; negative indices count from the end.
  const int raw = std::stoi(tok);
  const int idx = raw > 0 ? raw - 1 : count + raw;
  if (idx < 0 || idx >= count) throw AssetError(path + ": OBJ index out of range");
  return idx;
}

TriangleMesh load_obj(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw AssetError("cannot open mesh " + path);

  std::vector<Vec3> positions;
  std::vector<std::array<uint8_t, 3>> pos_colors;
  std::vector<Eigen::Vector2d> texcoords;
  bool any_color = false;

  TriangleMesh mesh;
  std::map<ObjKey, int> remap;

  auto emit_vertex = [&](int v, int vt) {
    const ObjKey key{v, vt};
    auto it = remap.find(key);
    if (it != remap.end()) return it->second;
    const int idx = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(positions[v]);
    if (any_color)
      mesh.colors.push_back(v < static_cast<int>(pos_colors.size())
                                ? pos_colors[v]
                                : std::array<uint8_t, 3>{200, 200, 200});
    if (vt >= 0) {
      mesh.uvs.resize(mesh.vertices.size(), Eigen::Vector2d::Zero());
      mesh.uvs[idx] = texcoords[vt];
    } else if (!mesh.uvs.empty()) {
      mesh.uvs.resize(mesh.vertices.size(), Eigen::Vector2d::Zero());
    }
    remap.emplace(key, idx);
    return idx;
  };

  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      double x, y, z;
      ls >> x >> y >> z;
      positions.emplace_back(x, y, z);
      double r, g, b;
      if (ls >> r >> g >> b) {  // vertex-color extension
        any_color = true;
        pos_colors.resize(positions.size(), {200, 200, 200});
        pos_colors.back() = {static_cast<uint8_t>(std::clamp(r, 0.0, 1.0) * 255.0 + 0.5),
                             static_cast<uint8_t>(std::clamp(g, 0.0, 1.0) * 255.0 + 0.5),
                             static_cast<uint8_t>(std::clamp(b, 0.0, 1.0) * 255.0 + 0.5)};
      }
    } else if (tag == "vt") {
      double u, v;
      ls >> u >> v;
      texcoords.emplace_back(u, v);
    } else if (tag == "f") {
      std::vector<int> face;
      std::string vert;
      while (ls >> vert) {
        const size_t s1 = vert.find('/');
        int v, vt = -1;
        if (s1 == std::string::npos) {
          v = obj_index(vert, static_cast<int>(positions.size()), path);
        } else {
          v = obj_index(vert.substr(0, s1), static_cast<int>(positions.size()), path);
          const size_t s2 = vert.find('/', s1 + 1);
          const std::string vt_tok =
              s2 == std::string::npos ? vert.substr(s1 + 1)
                                      : vert.substr(s1 + 1, s2 - s1 - 1);
          if (!vt_tok.empty())
            vt = obj_index(vt_tok, static_cast<int>(texcoords.size()), path);
        }
        face.push_back(emit_vertex(v, vt));
      }
      if (face.size() < 3) throw AssetError(path + ": OBJ face with <3 vertices");
      for (size_t k = 1; k + 1 < face.size(); ++k)
        mesh.triangles.push_back({face[0], face[static_cast<int>(k)],
                                  face[static_cast<int>(k + 1)]});
    } else if (tag == "usemtl" || tag == "mtllib" || tag == "vn" || tag == "o" ||
               tag == "g" || tag == "s") {
      // Geometry-only loader; materials resolve through texture_path set by
      // the caller or scene file.
      continue;
    }
  }
  if (any_color && mesh.colors.size() != mesh.vertices.size())
    mesh.colors.resize(mesh.vertices.size(), {200, 200, 200});
  return mesh;
}

}  // namespace

void save_mesh_obj(const std::string& path, const TriangleMesh& mesh) {
  std::ofstream f(path);
  if (!f) throw AssetError("cannot write mesh " + path);
  f.precision(9);
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& v = mesh.vertices[i];
    f << "v " << v.x() << " " << v.y() << " " << v.z();
    if (mesh.has_colors()) {
      const auto& c = mesh.colors[i];
      f << " " << c[0] / 255.0 << " " << c[1] / 255.0 << " " << c[2] / 255.0;
    }
    f << "\n";
  }
  if (mesh.has_uvs())
    for (const auto& uv : mesh.uvs) f << "vt " << uv.x() << " " << uv.y() << "\n";
  for (const auto& t : mesh.triangles) {
    if (mesh.has_uvs())
      f << "f " << t[0] + 1 << "/" << t[0] + 1 << " " << t[1] + 1 << "/"
        << t[1] + 1 << " " << t[2] + 1 << "/" << t[2] + 1 << "\n";
    else
      f << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
  }
}

// ---- PLY -------------------------------------------------------------------

namespace {

struct PlyProperty {
  std::string type;  // scalar type, or list count/value types joined
  std::string name;
  bool is_list = false;
  std::string count_type, value_type;
};

struct PlyElement {
  std::string name;
  size_t count = 0;
  std::vector<PlyProperty> props;
};

size_t ply_type_size(const std::string& t) {
  if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
  if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
  if (t == "int" || t == "uint" || t == "int32" || t == "uint32" || t == "float" ||
      t == "float32")
    return 4;
  if (t == "double" || t == "float64") return 8;
  throw AssetError("unsupported PLY type " + t);
}

double ply_read_binary(std::istream& f, const std::string& t) {
  unsigned char buf[8];
  const size_t n = ply_type_size(t);
  f.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(n));
  if (t == "char" || t == "int8") return static_cast<int8_t>(buf[0]);
  if (t == "uchar" || t == "uint8") return buf[0];
  auto le = [&](auto v) {
    std::memcpy(&v, buf, sizeof(v));
    return v;
  };
  if (t == "short" || t == "int16") return le(int16_t{});
  if (t == "ushort" || t == "uint16") return le(uint16_t{});
  if (t == "int" || t == "int32") return le(int32_t{});
  if (t == "uint" || t == "uint32") return le(uint32_t{});
  if (t == "float" || t == "float32") return le(float{});
  return le(double{});
}

TriangleMesh load_ply(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw AssetError("cannot open mesh " + path);

  std::string line;
  std::getline(f, line);
  if (line.substr(0, 3) != "ply") throw AssetError(path + ": not a PLY file");

  bool binary = false;
  std::vector<PlyElement> elements;
  while (std::getline(f, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt == "binary_little_endian")
        binary = true;
      else if (fmt != "ascii")
        throw AssetError(path + ": unsupported PLY format " + fmt);
    } else if (tag == "element") {
      PlyElement e;
      ls >> e.name >> e.count;
      elements.push_back(e);
    } else if (tag == "property") {
      if (elements.empty()) throw AssetError(path + ": property before element");
      PlyProperty p;
      std::string t;
      ls >> t;
      if (t == "list") {
        p.is_list = true;
        ls >> p.count_type >> p.value_type >> p.name;
      } else {
        p.type = t;
        ls >> p.name;
      }
      elements.back().props.push_back(p);
    } else if (tag == "end_header") {
      break;
    }
  }

  TriangleMesh mesh;
  auto read_scalar = [&](const std::string& type) -> double {
    if (binary) return ply_read_binary(f, type);
    double v;
    f >> v;
    return v;
  };

  for (const auto& e : elements) {
    if (e.name == "vertex") {
      int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1, iu = -1, iv = -1;
      for (size_t p = 0; p < e.props.size(); ++p) {
        const std::string& n = e.props[p].name;
        if (n == "x") ix = static_cast<int>(p);
        if (n == "y") iy = static_cast<int>(p);
        if (n == "z") iz = static_cast<int>(p);
        if (n == "red" || n == "r") ir = static_cast<int>(p);
        if (n == "green" || n == "g") ig = static_cast<int>(p);
        if (n == "blue" || n == "b") ib = static_cast<int>(p);
        if (n == "s" || n == "u" || n == "texture_u") iu = static_cast<int>(p);
        if (n == "t" || n == "v" || n == "texture_v") iv = static_cast<int>(p);
      }
      if (ix < 0 || iy < 0 || iz < 0)
        throw AssetError(path + ": PLY vertex element lacks x/y/z");
      const bool with_color = ir >= 0 && ig >= 0 && ib >= 0;
      const bool with_uv = iu >= 0 && iv >= 0;
      mesh.vertices.reserve(e.count);
      std::vector<double> vals(e.props.size());
      for (size_t i = 0; i < e.count; ++i) {
        for (size_t p = 0; p < e.props.size(); ++p) {
          if (e.props[p].is_list)
            throw AssetError(path + ": list property on vertex unsupported");
          vals[p] = read_scalar(e.props[p].type);
        }
        mesh.vertices.emplace_back(vals[ix], vals[iy], vals[iz]);
        if (with_color)
          mesh.colors.push_back({static_cast<uint8_t>(vals[ir]),
                                 static_cast<uint8_t>(vals[ig]),
                                 static_cast<uint8_t>(vals[ib])});
        if (with_uv) mesh.uvs.emplace_back(vals[iu], vals[iv]);
      }
    } else if (e.name == "face") {
      for (size_t i = 0; i < e.count; ++i) {
        for (const auto& p : e.props) {
          if (!p.is_list) {
            read_scalar(p.type);
            continue;
          }
          const int n = static_cast<int>(read_scalar(p.count_type));
          std::vector<int> face(n);
          for (int k = 0; k < n; ++k)
            face[k] = static_cast<int>(read_scalar(p.value_type));
          for (int k = 1; k + 1 < n; ++k)
            mesh.triangles.push_back({face[0], face[k], face[k + 1]});
        }
      }
    } else {
      // Skip unknown elements.
      for (size_t i = 0; i < e.count; ++i)
        for (const auto& p : e.props) {
          if (p.is_list) {
            const int n = static_cast<int>(read_scalar(p.count_type));
            for (int k = 0; k < n; ++k) read_scalar(p.value_type);
          } else {
            read_scalar(p.type);
          }
        }
    }
  }
  return mesh;
}

}  // namespace

void save_mesh_ply(const std::string& path, const TriangleMesh& mesh, bool binary) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw AssetError("cannot write mesh " + path);
  const bool with_color = mesh.has_colors();
  const bool with_uv = mesh.has_uvs();
  f << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n";
  f << "element vertex " << mesh.vertices.size() << "\n";
  f << "property float x\nproperty float y\nproperty float z\n";
  if (with_color)
    f << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  if (with_uv) f << "property float s\nproperty float t\n";
  f << "element face " << mesh.triangles.size() << "\n";
  f << "property list uchar int vertex_indices\nend_header\n";

  if (binary) {
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
      const float xyz[3] = {static_cast<float>(mesh.vertices[i].x()),
                            static_cast<float>(mesh.vertices[i].y()),
                            static_cast<float>(mesh.vertices[i].z())};
      f.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
      if (with_color)
        f.write(reinterpret_cast<const char*>(mesh.colors[i].data()), 3);
      if (with_uv) {
        const float uv[2] = {static_cast<float>(mesh.uvs[i].x()),
                             static_cast<float>(mesh.uvs[i].y())};
        f.write(reinterpret_cast<const char*>(uv), sizeof(uv));
      }
    }
    for (const auto& t : mesh.triangles) {
      const uint8_t n = 3;
      const int32_t idx[3] = {t[0], t[1], t[2]};
      f.write(reinterpret_cast<const char*>(&n), 1);
      f.write(reinterpret_cast<const char*>(idx), sizeof(idx));
    }
  } else {
    f.precision(9);
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
      f << mesh.vertices[i].x() << " " << mesh.vertices[i].y() << " "
        << mesh.vertices[i].z();
      if (with_color)
        f << " " << int(mesh.colors[i][0]) << " " << int(mesh.colors[i][1]) << " "
          << int(mesh.colors[i][2]);
      if (with_uv) f << " " << mesh.uvs[i].x() << " " << mesh.uvs[i].y();
      f << "\n";
    }
    for (const auto& t : mesh.triangles)
      f << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  }
}

TriangleMesh load_mesh(const std::string& path) {
  const size_t dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  TriangleMesh mesh;
  if (ext == "obj")
    mesh = load_obj(path);
  else if (ext == "ply")
    mesh = load_ply(path);
  else
    throw AssetError("unsupported mesh format: " + path);
  mesh.clean();
  if (mesh.empty()) throw AssetError(path + ": mesh is empty after cleaning");
  return mesh;
}

// ---- Volume / hull ---------------------------------------------------------

double signed_volume(const TriangleMesh& mesh) {
  double v = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    v += a.dot(b.cross(c));
  }
  return v / 6.0;
}

bool is_watertight(const TriangleMesh& mesh) {
  // Directed edge (a,b) must be matched by exactly one (b,a).
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      if (a == b) return false;
      edges[{a, b}] += 1;
    }
  }
  for (const auto& [e, n] : edges) {
    if (n != 1) return false;
    auto rev = edges.find({e.second, e.first});
    if (rev == edges.end() || rev->second != 1) return false;
  }
  return !mesh.triangles.empty();
}

namespace {

struct HullFace {
  std::array<int, 3> v;
  Vec3 normal;
  double offset;
  bool alive = true;
};

}  // namespace

TriangleMesh convex_hull(const std::vector<Vec3>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 4) throw DegenerateInputError("convex hull needs at least 4 points");

  // Scale-aware epsilon.
  Aabb box;
  for (const Vec3& p : points) box.expand(p);
  const double eps = 1e-9 * std::max(1e-9, (box.max - box.min).norm());

  // Initial tetrahedron from extreme points.
  int i0 = 0, i1 = -1;
  for (int i = 1; i < n; ++i)
    if (points[i].x() < points[i0].x()) i0 = i;
  double best = -1;
  for (int i = 0; i < n; ++i) {
    const double d = (points[i] - points[i0]).squaredNorm();
    if (d > best) {
      best = d;
      i1 = i;
    }
  }
  if (best <= eps * eps) throw DegenerateInputError("convex hull: points coincide");
  int i2 = -1;
  best = -1;
  const Vec3 dir = points[i1] - points[i0];
  for (int i = 0; i < n; ++i) {
    const double d = dir.cross(points[i] - points[i0]).squaredNorm();
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  if (best <= eps * eps) throw DegenerateInputError("convex hull: points collinear");
  int i3 = -1;
  best = -1;
  const Vec3 nrm = dir.cross(points[i2] - points[i0]);
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(nrm.dot(points[i] - points[i0]));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (best <= eps) throw DegenerateInputError("convex hull: points coplanar");

  std::vector<HullFace> faces;
  auto make_face = [&](int a, int b, int c, const Vec3& inside) {
    HullFace fc;
    fc.v = {a, b, c};
    fc.normal = (points[b] - points[a]).cross(points[c] - points[a]);
    const double len = fc.normal.norm();
    fc.normal /= len;
    fc.offset = fc.normal.dot(points[a]);
    if (fc.normal.dot(inside) - fc.offset > 0) {
      std::swap(fc.v[1], fc.v[2]);
      fc.normal = -fc.normal;
      fc.offset = -fc.offset;
    }
    return fc;
  };
  const Vec3 centroid =
      0.25 * (points[i0] + points[i1] + points[i2] + points[i3]);
  faces.push_back(make_face(i0, i1, i2, centroid));
  faces.push_back(make_face(i0, i1, i3, centroid));
  faces.push_back(make_face(i0, i2, i3, centroid));
  faces.push_back(make_face(i1, i2, i3, centroid));

  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    // Faces visible from points[p].
    std::vector<int> visible;
    for (size_t fi = 0; fi < faces.size(); ++fi)
      if (faces[fi].alive && faces[fi].normal.dot(points[p]) - faces[fi].offset > eps)
        visible.push_back(static_cast<int>(fi));
    if (visible.empty()) continue;

    // Horizon = directed edges of visible faces whose twin is hidden.
    std::map<std::pair<int, int>, int> edge_count;
    for (int fi : visible) {
      faces[fi].alive = false;
      const auto& v = faces[fi].v;
      for (int k = 0; k < 3; ++k) {
        const int a = v[k], b = v[(k + 1) % 3];
        auto it = edge_count.find({b, a});
        if (it != edge_count.end())
          edge_count.erase(it);
        else
          edge_count[{a, b}] += 1;
      }
    }
    for (const auto& [e, cnt] : edge_count) {
      (void)cnt;
      faces.push_back(make_face(e.first, e.second, p, centroid));
    }
  }

  // Compact into a mesh with remapped vertices.
  TriangleMesh hull;
  std::unordered_map<int, int> remap;
  for (const auto& fc : faces) {
    if (!fc.alive) continue;
    std::array<int, 3> tri;
    for (int k = 0; k < 3; ++k) {
      auto it = remap.find(fc.v[k]);
      if (it == remap.end()) {
        it = remap.emplace(fc.v[k], static_cast<int>(hull.vertices.size())).first;
        hull.vertices.push_back(points[fc.v[k]]);
      }
      tri[k] = it->second;
    }
    hull.triangles.push_back(tri);
  }
  return hull;
}

}  // namespace sceneforge
