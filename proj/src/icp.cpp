#include "sceneforge/icp.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <limits>
#include <unordered_map>

#include "sceneforge/parallel.hpp"
#include "sceneforge/rng.hpp"

namespace sceneforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Uniform hash grid for nearest-neighbor queries over a static point set.
// Ties resolve to the lowest point index, independent of scan order.
class UniformGridNN {
 public:
  void build(const std::vector<Vec3>& points, double cell_size) {
    points_ = &points;
    cell_ = cell_size;
    cells_.clear();
    lo_ = Eigen::Vector3i::Constant(std::numeric_limits<int>::max());
    hi_ = Eigen::Vector3i::Constant(std::numeric_limits<int>::min());
    for (size_t i = 0; i < points.size(); ++i) {
      const Eigen::Vector3i c = cell_of(points[i]);
      lo_ = lo_.cwiseMin(c);
      hi_ = hi_.cwiseMax(c);
      cells_[pack(c)].push_back(static_cast<int>(i));
    }
  }

  // Nearest point within max_dist; returns -1 when none qualifies. A
  // non-negative `exclude` index is skipped (self-queries).
  int nearest(const Vec3& q, double max_dist, double* out_dist,
              int exclude = -1) const {
    if (points_->empty()) return -1;
    Eigen::Vector3i c0 = cell_of(q);
    c0 = c0.cwiseMax(lo_).cwiseMin(hi_);
    int best = -1;
    double best_d2 = kInf;
    const double cap = max_dist;
    const int r_span = (hi_ - lo_).maxCoeff() + 1;
    for (int r = 0; r <= r_span; ++r) {
      // Cells on ring r are at least (r-1)·cell away from q.
      const double ring_min = std::max(0.0, (r - 1) * cell_);
      if (ring_min > cap) break;
      if (best >= 0 && ring_min > 0.0 && ring_min * ring_min > best_d2) break;
      visit_ring(c0, r, [&](const Eigen::Vector3i& c) {
        auto it = cells_.find(pack(c));
        if (it == cells_.end()) return;
        for (int idx : it->second) {
          if (idx == exclude) continue;
          const double d2 = ((*points_)[idx] - q).squaredNorm();
          if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
            best_d2 = d2;
            best = idx;
          }
        }
      });
    }
    if (best < 0 || best_d2 > cap * cap) return -1;
    if (out_dist) *out_dist = std::sqrt(best_d2);
    return best;
  }

 private:
  Eigen::Vector3i cell_of(const Vec3& p) const {
    return {static_cast<int>(std::floor(p.x() / cell_)),
            static_cast<int>(std::floor(p.y() / cell_)),
            static_cast<int>(std::floor(p.z() / cell_))};
  }

  static uint64_t pack(const Eigen::Vector3i& c) {
    // 21 bits per axis, offset to stay positive; ample at desk scale.
    const uint64_t x = static_cast<uint64_t>(c.x() + (1 << 20)) & 0x1fffff;
    const uint64_t y = static_cast<uint64_t>(c.y() + (1 << 20)) & 0x1fffff;
    const uint64_t z = static_cast<uint64_t>(c.z() + (1 << 20)) & 0x1fffff;
    return (x << 42) | (y << 21) | z;
  }

  template <typename Fn>
  void visit_ring(const Eigen::Vector3i& c0, int r, const Fn& fn) const {
    const Eigen::Vector3i a = (c0 - Eigen::Vector3i::Constant(r)).cwiseMax(lo_);
    const Eigen::Vector3i b = (c0 + Eigen::Vector3i::Constant(r)).cwiseMin(hi_);
    for (int x = a.x(); x <= b.x(); ++x)
      for (int y = a.y(); y <= b.y(); ++y)
        for (int z = a.z(); z <= b.z(); ++z) {
          const int cheb = std::max({std::abs(x - c0.x()), std::abs(y - c0.y()),
                                     std::abs(z - c0.z())});
          if (cheb != r) continue;
          fn(Eigen::Vector3i(x, y, z));
        }
  }

  const std::vector<Vec3>* points_ = nullptr;
  double cell_ = 1.0;
  std::unordered_map<uint64_t, std::vector<int>> cells_;
  Eigen::Vector3i lo_, hi_;
};

double robust_extent(const std::vector<Vec3>& points) {
  Vec3 c = Vec3::Zero();
  for (const Vec3& p : points) c += p;
  c /= static_cast<double>(points.size());
  std::vector<double> d(points.size());
  for (size_t i = 0; i < points.size(); ++i) d[i] = (points[i] - c).norm();
  std::sort(d.begin(), d.end());
  const size_t keep = std::max<size_t>(
      1, static_cast<size_t>(std::floor(0.98 * static_cast<double>(d.size()))));
  return d[keep - 1];
}

// Closed-form least-squares rotation + translation for fixed scale
// (orthogonal Procrustes on matched pairs): min Σ ‖s·R·x + t − y‖².
void solve_procrustes(const std::vector<Vec3>& x, const std::vector<Vec3>& y,
                      double scale, Quat* rotation, Vec3* translation) {
  const auto n = static_cast<double>(x.size());
  Vec3 mx = Vec3::Zero(), my = Vec3::Zero();
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (size_t i = 0; i < x.size(); ++i)
    h += (x[i] - mx) * (y[i] - my).transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixV() * svd.matrixU().transpose();
  if (r.determinant() < 0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1;
    r = svd.matrixV() * flip * svd.matrixU().transpose();
  }
  *rotation = Quat(r).normalized();
  *translation = my - scale * (r * mx);
}

struct StartOutcome {
  SimilarityTransform pose;
  double rms = kInf;
  int iterations = 0;
  double final_cutoff = 0.0;
  std::vector<double> history;
  bool failed = false;
};

}  // namespace

PointCloud sample_surface(const TriangleMesh& mesh, int n, uint64_t seed) {
  if (mesh.empty()) throw DegenerateInputError("sample_surface: empty mesh");
  PointCloud cloud;
  if (n <= 0) return cloud;

  std::vector<double> cum(mesh.triangles.size());
  double total = 0.0;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    total += mesh.triangle_area(static_cast<int>(t));
    cum[t] = total;
  }
  if (total <= 0.0)
    throw DegenerateInputError("sample_surface: mesh has zero area");

  Rng rng(seed);
  cloud.points.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double pick = rng.uniform() * total;
    const size_t t = std::min(
        static_cast<size_t>(std::lower_bound(cum.begin(), cum.end(), pick) -
                            cum.begin()),
        cum.size() - 1);
    const auto& tri = mesh.triangles[t];
    // sqrt trick → uniform barycentric coordinates.
    const double r1 = std::sqrt(rng.uniform());
    const double r2 = rng.uniform();
    const Vec3 p = (1.0 - r1) * mesh.vertices[tri[0]] +
                   r1 * (1.0 - r2) * mesh.vertices[tri[1]] +
                   r1 * r2 * mesh.vertices[tri[2]];
    cloud.points.push_back(p);
  }
  return cloud;
}

double median_nn_spacing(const std::vector<Vec3>& points) {
  if (points.size() < 2) return 0.0;
  Aabb box;
  for (const Vec3& p : points) box.expand(p);
  const double diag = (box.max - box.min).norm();
  const double cell = std::max(
      1e-9, diag / std::cbrt(static_cast<double>(points.size())) * 0.5);
  UniformGridNN grid;
  grid.build(points, cell);
  std::vector<double> d(points.size(), 0.0);
  for (size_t i = 0; i < points.size(); ++i) {
    double dist = kInf;
    grid.nearest(points[i], kInf, &dist, static_cast<int>(i));
    d[i] = dist;
  }
  std::sort(d.begin(), d.end());
  return d[d.size() / 2];
}

double estimate_scale(const TriangleMesh& mesh, const PointCloud& target) {
  if (mesh.empty() || target.empty())
    throw DegenerateInputError("estimate_scale: empty input");
  const PointCloud samples = sample_surface(mesh, 20000, 0x5ca1eULL);
  const double src = robust_extent(samples.points);
  const double dst = robust_extent(target.points);
  if (src < 1e-12 || dst < 1e-12)
    throw DegenerateInputError("estimate_scale: zero-extent input");
  return dst / src;
}

RegistrationResult icp_register(const TriangleMesh& mesh,
                                const PointCloud& target,
                                const IcpConfig& cfg) {
  if (target.size() < 10)
    throw DegenerateInputError("icp_register: target needs >= 10 points");
  if (cfg.surface_samples < 100)
    throw ConfigError("icp_register: surface_samples must be >= 100");
  if (cfg.max_iterations < 1 || cfg.correspondence_cutoff < 0.0)
    throw ConfigError("icp_register: bad config");

  const PointCloud samples = sample_surface(mesh, cfg.surface_samples, cfg.seed);

  // Scale from robust extents, held fixed during iterations.
  const double src_extent = robust_extent(samples.points);
  const double dst_extent = robust_extent(target.points);
  if (src_extent < 1e-12 || dst_extent < 1e-12)
    throw DegenerateInputError("icp_register: zero-extent input");
  const double scale = dst_extent / src_extent;

  double cutoff = cfg.correspondence_cutoff;
  if (cutoff <= 0.0)
    cutoff = std::max(3.0 * median_nn_spacing(target.points), 0.005);

  // Static NN grid over the canonical mesh samples; queries map targets into
  // the mesh frame, so mesh-frame distances are world distances / scale.
  const double sample_spacing =
      std::sqrt(mesh.surface_area() / static_cast<double>(cfg.surface_samples));
  UniformGridNN grid;
  grid.build(samples.points, std::max(2.0 * sample_spacing, 1e-6));

  Vec3 mesh_centroid = Vec3::Zero();
  for (const Vec3& p : samples.points) mesh_centroid += p;
  mesh_centroid /= static_cast<double>(samples.size());
  const Vec3 target_centroid = target.centroid();

  // Fixed start grid: yaws about +Z crossed with {0°, ±45°} pitch tilts.
  std::vector<Quat> starts;
  if (cfg.rotation_starts <= 1) {
    starts.push_back(Quat::Identity());
  } else {
    const int n_pitch = cfg.rotation_starts >= 3 ? 3 : 1;
    const int n_yaw = std::max(1, cfg.rotation_starts / n_pitch);
    const double pitches[3] = {0.0, M_PI / 4.0, -M_PI / 4.0};
    for (int iy = 0; iy < n_yaw; ++iy) {
      const double yaw = 2.0 * M_PI * iy / n_yaw;
      for (int ip = 0; ip < n_pitch; ++ip)
        starts.push_back(Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ())) *
                         Quat(Eigen::AngleAxisd(pitches[ip], Vec3::UnitX())));
    }
  }

  std::vector<StartOutcome> outcomes(starts.size());
  parallel_for(0, static_cast<int>(starts.size()), cfg.threads, [&](int si) {
    StartOutcome& out = outcomes[si];
    Quat rot = starts[si];
    Vec3 trans = target_centroid - scale * (rot * mesh_centroid);

    double prev_rms = kInf;
    std::vector<Vec3> px, py;
    px.reserve(target.size());
    py.reserve(target.size());
    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
      const double cutoff_eff =
          iter == 0 ? kInf : std::max(cutoff, 3.0 * prev_rms);
      // Correspondences in the mesh frame.
      const Quat rot_inv = rot.conjugate();
      const double inv_scale = 1.0 / scale;
      px.clear();
      py.clear();
      double sq_sum = 0.0;
      for (size_t j = 0; j < target.size(); ++j) {
        const Vec3 q = inv_scale * (rot_inv * (target.points[j] - trans));
        double d_mesh = 0.0;
        const int idx = grid.nearest(q, cutoff_eff * inv_scale, &d_mesh);
        if (idx < 0) continue;
        px.push_back(samples.points[idx]);
        py.push_back(target.points[j]);
        const double d_world = d_mesh * scale;
        sq_sum += d_world * d_world;
      }
      if (px.empty()) {
        out.failed = true;
        out.rms = kInf;
        return;
      }
      const double rms = std::sqrt(sq_sum / static_cast<double>(px.size()));
      out.history.push_back(rms);
      out.iterations = iter + 1;
      out.rms = rms;
      out.final_cutoff = cutoff_eff;
      if (std::abs(prev_rms - rms) < cfg.convergence_delta) break;
      prev_rms = rms;
      if (iter + 1 == cfg.max_iterations) break;
      solve_procrustes(px, py, scale, &rot, &trans);
    }
    out.pose = SimilarityTransform{{rot, trans}, scale};
  });

  int best = -1;
  for (size_t si = 0; si < outcomes.size(); ++si) {
    if (outcomes[si].failed) continue;
    if (best < 0 || outcomes[si].rms < outcomes[best].rms)
      best = static_cast<int>(si);
  }
  if (best < 0)
    throw RegistrationFailedError(
        "icp_register: no correspondences within cutoff " +
        std::to_string(cutoff) + " m for any of " +
        std::to_string(starts.size()) + " starts (target " +
        std::to_string(target.size()) + " pts, scale " + std::to_string(scale) +
        ")");

  RegistrationResult res;
  res.pose = outcomes[best].pose;
  res.rms = outcomes[best].rms;
  res.iterations_used = outcomes[best].iterations;
  res.start_index = best;
  res.final_cutoff = outcomes[best].final_cutoff;
  res.rms_history = std::move(outcomes[best].history);
  return res;
}

}  // namespace sceneforge
