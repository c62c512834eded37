#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "po/applications.hpp"
#include "po/graph.hpp"
#include "po/params.hpp"

namespace po {

/// Everything a CLI run depends on. Serialises to one JSON file; the JSON is
/// echoed into every report together with its hash.
struct RunConfig {
  std::string graph;
  std::uint64_t seed = 1;
  double epsilon = 0.1;
  ParamMode mode = ParamMode::Explicit;
  ParamOverrides overrides;
  bool global = false;
  bool verify = false;
  std::size_t samples = 1000;
  bool force = false;
  std::string out;
  TesterConfig tester;
  std::size_t census_max_n = 5000;
  /// Values recorded by the calibration run; carried along, never interpreted.
  nlohmann::json calibration;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::filesystem::path& path);
};

/// Oracle parameters for a run on g at proximity eps.
OracleParams params_for(const RunConfig& cfg, const Graph& g, double eps);

/// 64-bit FNV-1a of the compact JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& j);

}  // namespace po
