#include "po/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace po {

nlohmann::json RunConfig::to_json() const {
  return {{"graph", graph},
          {"seed", seed},
          {"epsilon", epsilon},
          {"mode", to_string(mode)},
          {"overrides", overrides},
          {"global", global},
          {"verify", verify},
          {"samples", samples},
          {"force", force},
          {"out", out},
          {"tester", tester.to_json()},
          {"census_max_n", census_max_n},
          {"calibration", calibration}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  static const std::set<std::string> keys{"graph", "seed",  "epsilon", "mode",   "overrides",   "global", "verify",
                                          "samples", "force", "out",     "tester", "census_max_n", "calibration"};
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!keys.contains(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  }
  RunConfig c;
  c.graph = j.value("graph", c.graph);
  c.seed = j.value("seed", c.seed);
  c.epsilon = j.value("epsilon", c.epsilon);
  if (j.contains("mode")) c.mode = parse_mode(j["mode"].get<std::string>());
  if (j.contains("overrides")) {
    for (const auto& [key, value] : j["overrides"].items()) {
      c.overrides[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
  }
  c.global = j.value("global", c.global);
  c.verify = j.value("verify", c.verify);
  c.samples = j.value("samples", c.samples);
  c.force = j.value("force", c.force);
  c.out = j.value("out", c.out);
  if (j.contains("tester")) c.tester = TesterConfig::from_json(j["tester"]);
  c.census_max_n = j.value("census_max_n", c.census_max_n);
  if (j.contains("calibration")) c.calibration = j["calibration"];
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
}

OracleParams params_for(const RunConfig& cfg, const Graph& g, double eps) {
  return derive_params(eps, std::max<std::uint32_t>(2, g.degree_bound()), cfg.mode, cfg.overrides);
}

std::string config_hash(const nlohmann::json& j) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace po
