#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "po/graph.hpp"
#include "po/oracle.hpp"
#include "po/params.hpp"

namespace po {

/// Membership test for a small induced subgraph.
using ComponentDecider = std::function<bool(const Graph&)>;
/// Additive score of a small induced subgraph.
using ComponentScorer = std::function<double(const Graph&)>;

class RegistryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fraction of cut probes. A probe draws a uniform vertex u and a uniform slot
/// i in [0, d); it hits when i < deg(u) and u, N(u)[i] lie in different pieces.
/// The expectation is 2 cut / (d n), which is 1 for all-singleton pieces of a
/// d-regular graph. `stream` selects an independent probe sequence.
double estimate_cut_fraction(const PartitionOracle& oracle, std::size_t samples, std::uint64_t stream = 0);

struct TesterConfig {
  std::size_t seed_retries = 8;
  double probe_factor = 48;   ///< phase 1 probes: ceil(probe_factor / eps)
  double vertex_factor = 8;   ///< phase 2 vertices: ceil(vertex_factor / eps)
  /// Largest accepted cut estimate; defaults to eps / 4.
  std::optional<double> cut_threshold;
  std::size_t piece_cap = 64;

  std::size_t probes(double eps) const;
  std::size_t vertices(double eps) const;
  double threshold(double eps) const { return cut_threshold.value_or(eps / 4); }

  nlohmann::json to_json() const;
  static TesterConfig from_json(const nlohmann::json& j);
};

struct TestOutcome {
  bool accept = false;
  std::string reason;  ///< "accepted", "cut" or "piece"
  std::size_t seeds_tried = 0;
  std::optional<std::uint64_t> oracle_seed;
  double cut_estimate = 0;
  std::size_t vertices_checked = 0;
  std::optional<Vertex> witness;  ///< sampled vertex whose piece failed

  nlohmann::json to_json() const;
};

/// Two-phase tester. Phase 1 builds an oracle per derived seed until the cut
/// estimate is at most the threshold (reject if none is). Phase 2 queries the
/// pieces of sampled vertices and rejects if any fails the decider.
TestOutcome test_property(const Graph& g, double epsilon, const OracleParams& params, std::uint64_t seed,
                          const ComponentDecider& decider, const TesterConfig& cfg = {});

struct Estimate {
  double estimate = 0;
  double stderr_proxy = 0;  ///< n * sample standard deviation / sqrt(samples)
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t oracle_seed = 0;
  double cut_estimate = 0;

  nlohmann::json to_json() const;
};

/// n * mean over sampled v of score(piece(v)) / |piece(v)|, on a fixed oracle.
Estimate estimate_with_oracle(const PartitionOracle& oracle, const ComponentScorer& scorer, std::size_t samples,
                              std::uint64_t stream, std::size_t piece_cap = 64);

/// Sum of score over all pieces; the value the sampled estimate concentrates on.
double score_all_pieces(const PartitionOracle& oracle, const ComponentScorer& scorer, std::size_t piece_cap = 64);

/// Picks an oracle seed as the tester's phase 1 does (falling back to the seed
/// with the smallest cut estimate) and samples the additive estimate.
Estimate estimate_additive(const Graph& g, double epsilon, const OracleParams& params, std::uint64_t seed,
                           const ComponentScorer& scorer, std::size_t samples, const TesterConfig& cfg = {});

/// Registered names: bipartite, triangle-free.
ComponentDecider decider_by_name(const std::string& name);
/// Registered names: matching, vertex-cover, independent-set, dominating-set.
ComponentScorer scorer_by_name(const std::string& name);
std::vector<std::string> decider_names();
std::vector<std::string> scorer_names();

}  // namespace po
