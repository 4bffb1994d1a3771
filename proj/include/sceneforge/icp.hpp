#pragma once

#include <cstdint>
#include <vector>

#include "sceneforge/error.hpp"
#include "sceneforge/mesh.hpp"
#include "sceneforge/pointcloud.hpp"

namespace sceneforge {

struct IcpConfig {
  int max_iterations = 50;
  double convergence_delta = 1e-6;  // meters of RMS change
  int surface_samples = 20000;
  int rotation_starts = 24;         // yaw grid × {0°, ±45°} pitch
  double correspondence_cutoff = 0.0;  // ≤ 0 → 3 × median NN spacing, floor 5 mm
  uint64_t seed = 0;
  int threads = 1;
};

struct RegistrationResult {
  SimilarityTransform pose;  // world_from_mesh
  double rms = 0.0;          // meters, over the final correspondence set
  int iterations_used = 0;
  int start_index = 0;
  double final_cutoff = 0.0;        // effective cutoff of the reported rms
  std::vector<double> rms_history;  // per-iteration rms of the winning start
};

/// Area-uniform surface sampling; deterministic given seed. n = 0 yields an
/// empty cloud.
PointCloud sample_surface(const TriangleMesh& mesh, int n, uint64_t seed);

/// Ratio of robust extents (target / sampled mesh). Robust extent is the
/// bounding-sphere radius about the centroid after trimming the 2% farthest
/// points.
double estimate_scale(const TriangleMesh& mesh, const PointCloud& target);

/// Multi-start point-to-point ICP registering `mesh` (canonical frame) to the
/// observed target cloud. Scale is estimated once up front and held fixed;
/// each start iterates nearest-correspondence (for every target point, the
/// nearest transformed mesh sample) and a closed-form Procrustes solve until
/// the RMS change drops below convergence_delta. Lowest final RMS wins, ties
/// by start index. Deterministic given seed and config.
RegistrationResult icp_register(const TriangleMesh& mesh,
                                const PointCloud& target,
                                const IcpConfig& cfg);

/// Median nearest-neighbor spacing of a point set (exact, grid-accelerated).
double median_nn_spacing(const std::vector<Vec3>& points);

}  // namespace sceneforge
