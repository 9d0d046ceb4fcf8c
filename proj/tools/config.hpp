#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "msk/norms.hpp"
#include "msk/numerics.hpp"
#include "msk/surfaces.hpp"

namespace msk::cli {

struct GridSpec {
  int ns = 20, nt = 20;
  double margin_s = 1e-3, margin_t = 0.0;
};

struct PlanarSpec {
  std::string support;  // circle | ellipse | constant | csv
  double radius = 1.0;  // circle and constant
  double a = 1.0, b = 1.0;
  std::string path;
  int nodes = 2048;
};

struct OutputSpec {
  std::string format = "json";  // json | csv
  std::string path;             // empty: stdout
};

struct RunConfig {
  nlohmann::json raw;  // echoed verbatim into the report
  NormModel norm = NormModel::euclidean();
  SurfacePatch surface = euclidean_sphere(1.0);
  GridSpec grid;
  std::vector<std::string> checks;
  NumericsConfig numerics;
  OutputSpec output;
  std::uint64_t seed = 0;
  Vec3 center = Vec3::Zero();
  std::optional<PlanarSpec> planar;
  bool fd_jets = false;  // either the norm or the surface uses finite differences
};

/// Validates and builds everything a run needs. Throws Error(ConfigError)
/// with the offending key in the message.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

}  // namespace msk::cli
