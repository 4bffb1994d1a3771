#pragma once

#include <stdexcept>
#include <string>

namespace sceneforge {

// Stable error classes; the CLI maps each to a distinct exit code.
enum class ErrorCode {
  config = 2,           // bad configuration / dimension mismatch
  input = 3,            // missing or unreadable input file
  degenerate_input = 4, // too few / collinear / zero-extent data
  low_confidence = 5,   // estimate below the configured confidence floor
  registration_failed = 6,
  no_placement = 7,
  asset = 8,            // unloadable mesh or texture
  behind_camera = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorCode::config, w) {}
};
struct InputError : Error {
  explicit InputError(const std::string& w) : Error(ErrorCode::input, w) {}
};
struct DegenerateInputError : Error {
  explicit DegenerateInputError(const std::string& w)
      : Error(ErrorCode::degenerate_input, w) {}
};
struct RegistrationFailedError : Error {
  explicit RegistrationFailedError(const std::string& w)
      : Error(ErrorCode::registration_failed, w) {}
};
struct NoPlacementError : Error {
  explicit NoPlacementError(const std::string& w)
      : Error(ErrorCode::no_placement, w) {}
};
struct AssetError : Error {
  explicit AssetError(const std::string& w) : Error(ErrorCode::asset, w) {}
};
struct BehindCameraError : Error {
  explicit BehindCameraError(const std::string& w)
      : Error(ErrorCode::behind_camera, w) {}
};

}  // namespace sceneforge
