#pragma once

#include <optional>
#include <string>

#include "sceneforge/mesh.hpp"

namespace sceneforge {

struct PhysicalProperties {
  double density = 500.0;           // kg/m³
  double static_friction = 0.5;     // unitless, clamped to [0, 2]
  double dynamic_friction = 0.4;    // defaults to 0.8 × static
  double restitution = 0.3;         // [0, 1]

  bool valid() const {
    return density > 0 && static_friction >= 0 && static_friction <= 2 &&
           dynamic_friction >= 0 && dynamic_friction <= 2 &&
           restitution >= 0 && restitution <= 1;
  }
};

enum class PropertyProvenance { table, remote, fallback };

struct PropertyRequest {
  std::string category;
  std::string context;  // optional free-form hint forwarded to the estimator
};

struct PropertyResponse {
  PhysicalProperties properties;
  PropertyProvenance provenance = PropertyProvenance::fallback;
};

const char* to_string(PropertyProvenance p);

/// Remote estimator interface; implementations return nullopt on timeout or
/// malformed payloads (the caller falls through to the table).
class PropertyEstimatorClient {
 public:
  virtual ~PropertyEstimatorClient() = default;
  virtual std::optional<PhysicalProperties> estimate(const PropertyRequest&) = 0;
};

/// HTTP client: POST <endpoint>/estimate with a JSON body
/// {"category": ..., "context": ...}; expects JSON {"density": kg/m³,
/// "static_friction": ..., "dynamic_friction"?: ..., "restitution"?: ...}.
/// Out-of-range values are rejected, never clamped.
class HttpPropertyEstimator : public PropertyEstimatorClient {
 public:
  explicit HttpPropertyEstimator(std::string endpoint, double timeout_s = 10.0);
  std::optional<PhysicalProperties> estimate(const PropertyRequest&) override;

 private:
  std::string endpoint_;
  double timeout_s_;
};

/// Category → properties. Order of precedence: remote client (when given and
/// its response validates), builtin table (case-insensitive exact match),
/// declared defaults. Total: every category yields valid properties.
PropertyResponse estimate_properties(const std::string& category,
                                     PropertyEstimatorClient* client = nullptr,
                                     const std::string& context = "");

/// Builtin table lookup only; nullopt for unknown categories.
std::optional<PhysicalProperties> lookup_builtin_properties(
    const std::string& category);

struct MassResult {
  double mass = 0.0;           // kg
  bool convex_hull_fallback = false;  // volume came from the hull
};

/// mass = density × scale³ × volume. Watertight meshes use the signed
/// divergence-theorem volume (negative volume → degenerate-geometry error);
/// open meshes fall back to the convex-hull volume with the flag set.
MassResult mass_from_density(const TriangleMesh& mesh, double scale,
                             double density);

}  // namespace sceneforge
