#include "sceneforge/properties.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>
#define CPPHTTPLIB_NO_EXCEPTIONS
#include <httplib.h>

#include "sceneforge/error.hpp"

namespace sceneforge {

namespace {

struct TableEntry {
  const char* category;
  double density;          // kg/m³
  double static_friction;  // unitless
  double restitution;
};

// Densities from standard material handbooks / produce measurements;
// friction and restitution are typical rigid-body simulator settings for the
// material class.
constexpr TableEntry kTable[] = {
    {"apple", 840.0, 0.50, 0.20},       // fresh pome fruit, just under water
    {"banana", 980.0, 0.45, 0.15},      // ripe banana, near-neutral buoyancy
    {"orange", 940.0, 0.50, 0.20},      // citrus with peel
    {"lemon", 930.0, 0.50, 0.20},
    {"lime", 960.0, 0.50, 0.20},
    {"pear", 900.0, 0.50, 0.20},
    {"peach", 950.0, 0.50, 0.15},
    {"tomato", 990.0, 0.55, 0.10},      // high water content
    {"potato", 1080.0, 0.55, 0.15},     // denser than water, sinks
    {"carrot", 1040.0, 0.50, 0.15},
    {"broccoli", 550.0, 0.60, 0.10},    // florets trap air
    {"cucumber", 950.0, 0.45, 0.15},
    {"onion", 960.0, 0.45, 0.20},
    {"garlic", 1000.0, 0.50, 0.15},
    {"strawberry", 900.0, 0.55, 0.10},
    {"grape", 1050.0, 0.45, 0.15},
    {"avocado", 960.0, 0.50, 0.15},
    {"bread", 250.0, 0.60, 0.05},       // baked loaf, mostly air
    {"egg", 1030.0, 0.30, 0.05},        // shell-on hen egg
    {"cheese", 1090.0, 0.45, 0.05},     // semi-hard cheese block
    {"can", 2700.0, 0.35, 0.30},        // aluminum shell, treated as solid wall
    {"bottle", 1380.0, 0.35, 0.30},     // PET wall density
    {"cup", 2300.0, 0.40, 0.40},        // ceramic
    {"mug", 2300.0, 0.40, 0.40},
    {"glass", 2500.0, 0.40, 0.50},      // soda-lime glass
    {"bowl", 2300.0, 0.40, 0.40},       // ceramic bowl
    {"plate", 2300.0, 0.40, 0.40},
    {"jar", 2500.0, 0.40, 0.40},
    {"pan", 2700.0, 0.40, 0.30},        // aluminum cookware
    {"pot", 7900.0, 0.40, 0.30},        // stainless steel
    {"knife", 7900.0, 0.30, 0.30},
    {"fork", 7900.0, 0.30, 0.30},
    {"spoon", 7900.0, 0.30, 0.30},
    {"spatula", 1100.0, 0.40, 0.20},    // nylon kitchen tool
    {"cutting board", 700.0, 0.45, 0.25},  // hardwood
    {"book", 800.0, 0.55, 0.10},        // stacked paper
    {"box", 150.0, 0.50, 0.10},         // corrugated cardboard shell
    {"block", 650.0, 0.50, 0.30},       // solid softwood block
    {"brick", 1900.0, 0.70, 0.20},      // fired clay
    {"ball", 1100.0, 0.60, 0.80},       // solid rubber
    {"tennis ball", 380.0, 0.60, 0.75}, // hollow felt-rubber shell, averaged
    {"dice", 1180.0, 0.40, 0.50},       // cast acrylic
    {"toy", 1050.0, 0.45, 0.40},        // molded ABS plastic
    {"sponge", 90.0, 0.80, 0.05},       // cellulose foam
    {"towel", 350.0, 0.75, 0.02},       // folded cotton
    {"phone", 1800.0, 0.40, 0.25},      // glass/metal slab, averaged
    {"remote", 1100.0, 0.45, 0.25},     // ABS shell with electronics
    {"scissors", 6000.0, 0.30, 0.25},   // steel blades, plastic handles
    {"marker", 950.0, 0.40, 0.25},      // polypropylene barrel
    {"soda can", 990.0, 0.35, 0.20},    // filled beverage can
};

std::string normalize(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::tolower(c)));
  const auto a = out.find_first_not_of(" \t");
  const auto b = out.find_last_not_of(" \t");
  return a == std::string::npos ? "" : out.substr(a, b - a + 1);
}

}  // namespace

const char* to_string(PropertyProvenance p) {
  switch (p) {
    case PropertyProvenance::table: return "table";
    case PropertyProvenance::remote: return "remote";
    case PropertyProvenance::fallback: return "default";
  }
  return "default";
}

std::optional<PhysicalProperties> lookup_builtin_properties(
    const std::string& category) {
  const std::string key = normalize(category);
  for (const TableEntry& e : kTable) {
    if (key == e.category) {
      PhysicalProperties p;
      p.density = e.density;
      p.static_friction = e.static_friction;
      p.dynamic_friction = 0.8 * e.static_friction;
      p.restitution = e.restitution;
      return p;
    }
  }
  return std::nullopt;
}

HttpPropertyEstimator::HttpPropertyEstimator(std::string endpoint,
                                             double timeout_s)
    : endpoint_(std::move(endpoint)), timeout_s_(timeout_s) {}

std::optional<PhysicalProperties> HttpPropertyEstimator::estimate(
    const PropertyRequest& req) {
  httplib::Client cli(endpoint_);
  cli.set_connection_timeout(std::chrono::milliseconds(
      static_cast<int>(timeout_s_ * 1000)));
  cli.set_read_timeout(std::chrono::milliseconds(
      static_cast<int>(timeout_s_ * 1000)));
  nlohmann::json body{{"category", req.category}, {"context", req.context}};
  auto res = cli.Post("/estimate", body.dump(), "application/json");
  if (!res || res->status != 200) return std::nullopt;
  nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("density") ||
      !j.contains("static_friction"))
    return std::nullopt;
  PhysicalProperties p;
  if (!j["density"].is_number() || !j["static_friction"].is_number())
    return std::nullopt;
  p.density = j["density"].get<double>();
  p.static_friction = j["static_friction"].get<double>();
  p.dynamic_friction = j.value("dynamic_friction", 0.8 * p.static_friction);
  p.restitution = j.value("restitution", 0.3);
  if (!p.valid() || p.density > 30000.0) return std::nullopt;
  return p;
}

PropertyResponse estimate_properties(const std::string& category,
                                     PropertyEstimatorClient* client,
                                     const std::string& context) {
  if (client) {
    const auto remote = client->estimate({category, context});
    if (remote && remote->valid())
      return {*remote, PropertyProvenance::remote};
  }
  if (auto table = lookup_builtin_properties(category))
    return {*table, PropertyProvenance::table};
  return {PhysicalProperties{}, PropertyProvenance::fallback};
}

MassResult mass_from_density(const TriangleMesh& mesh, double scale,
                             double density) {
  if (density <= 0.0) throw ConfigError("mass_from_density: density must be > 0");
  if (mesh.empty()) throw DegenerateInputError("mass_from_density: empty mesh");
  MassResult out;
  double volume;
  if (is_watertight(mesh)) {
    volume = signed_volume(mesh);
  } else {
    volume = signed_volume(convex_hull(mesh.vertices));
    out.convex_hull_fallback = true;
  }
  if (volume <= 0.0)
    throw DegenerateInputError(
        "mass_from_density: non-positive mesh volume (inward orientation or "
        "degenerate geometry)");
  out.mass = density * scale * scale * scale * volume;
  return out;
}

}  // namespace sceneforge
