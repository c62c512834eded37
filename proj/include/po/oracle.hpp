#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "po/diffusion.hpp"
#include "po/graph.hpp"
#include "po/params.hpp"

namespace po {

/// Size thresholds k_1..k_{h_bar} produced by findr; k_{h_bar} is always 0.
struct PhaseThresholds {
  std::vector<std::size_t> k;

  /// k_h for 1 <= h <= h_bar.
  std::size_t at(std::size_t h) const { return k.at(h - 1); }
  std::size_t max() const;
  friend bool operator==(const PhaseThresholds&, const PhaseThresholds&) = default;
};

/// What findr saw and decided in one phase.
struct FindrPhaseTrace {
  std::size_t h = 0;
  std::size_t in_phase = 0;   ///< |S_h| before truncation to keep_count
  bool gate_passed = false;
  std::vector<Vertex> seeds;  ///< S_h after truncation (a multiset, in draw order)
  std::vector<std::size_t> viable;  ///< viable seed count per k candidate
  double quota = 0;
  std::size_t chosen_k = 0;
};

struct FindrResult {
  PhaseThresholds thresholds;
  std::vector<FindrPhaseTrace> phases;
};

/// Vertex -> anchor map. Pieces are the maximal connected same-anchor sets.
struct Partition {
  std::vector<Vertex> anchor;
  /// Phase of the seed whose cluster first covered each vertex; u is in F_h iff
  /// removed_in_phase[u] >= h. Only filled by the global run.
  std::vector<std::size_t> removed_in_phase;

  /// Pieces ordered by smallest member.
  std::vector<VertexSet> pieces(const Graph& g) const;
  /// piece index per vertex, consistent with pieces().
  std::vector<std::size_t> piece_index(const Graph& g) const;
  std::size_t cut_edges(const Graph& g) const;
};

/// The deterministic sweep used by cluster: scan k' from 2k down to k, take
/// C = L(k') + {v}, and accept the first C with |C| in [k, 2k], C inside the
/// support and Phi(C) <= phi. Falls back to {v}.
VertexSet cluster_from_step(const Graph& g, const DiffusionStep& step, Vertex v, std::size_t k, double phi);

/// cluster(v, t, k) computed from scratch.
VertexSet cluster(const Graph& g, const OracleParams& params, Vertex v, std::size_t t, std::size_t k);

/// (h, k)-viability decision shared by findr and the censuses: the cluster is
/// not a singleton and at least beta^3 k of its members are free.
bool is_viable(std::size_t cluster_size, std::size_t free_members, std::size_t k, double beta);

/// findr's decision rule. Among candidates with at least one viable seed and at
/// least `quota` of them, picks the one maximising k * (viable count), ties to
/// the larger k; 0 if there is none.
std::size_t choose_threshold(std::span<const std::size_t> k_candidates, std::span<const std::size_t> viable,
                             double quota);

/// Local partition oracle over a fixed graph, seed and parameter bundle.
///
/// All answers are pure functions of (graph, seed, params). Diffusions, inverse
/// balls, clusters and anchors are memoised; the memo tables are safe for
/// concurrent queries. findr runs once, on first use of thresholds(), and
/// concurrent callers block until it finishes.
class PartitionOracle {
 public:
  PartitionOracle(const Graph& g, OracleParams params, std::uint64_t master_seed);
  ~PartitionOracle();

  PartitionOracle(const PartitionOracle&) = delete;
  PartitionOracle& operator=(const PartitionOracle&) = delete;

  const Graph& graph() const { return *g_; }
  const OracleParams& params() const { return params_; }
  const SeedContext& seeds() const { return ctx_; }
  std::uint64_t master_seed() const { return ctx_.master_seed(); }

  std::size_t phase_of(Vertex v) const { return ctx_.phase_of(v); }
  std::size_t walk_len_of(Vertex v) const { return ctx_.walk_len_of(v); }
  bool precedes(Vertex u, Vertex v) const { return ctx_.precedes(u, v); }

  /// Truncated diffusion steps 0..ell from v.
  const std::vector<DiffusionStep>& trajectory(Vertex v) const;

  VertexSet cluster(Vertex v, std::size_t t, std::size_t k) const;
  /// cluster(s, t_s, k), memoised per (s, k).
  const VertexSet& seed_cluster(Vertex s, std::size_t k) const;

  /// IB(v) = {w : v in supp(M^t w) for some t <= ell}, by frontier expansion.
  const VertexSet& find_ib(Vertex v) const;

  /// u is in F_h, decided locally from IB(u) and the clusters of V_{<h}.
  /// Only k_1..k_{h-1} of `k` are read.
  bool is_free(Vertex u, std::size_t h, const PhaseThresholds& k) const;
  bool is_free(Vertex u, std::size_t h) const { return is_free(u, h, thresholds()); }

  /// Runs findr without touching the memoised result.
  FindrResult run_findr() const;
  const PhaseThresholds& thresholds() const;
  const FindrResult& findr_result() const;

  Vertex find_anchor(Vertex v, const PhaseThresholds& k) const;
  Vertex find_anchor(Vertex v) const;
  VertexSet find_partition(Vertex v, const PhaseThresholds& k) const;
  VertexSet find_partition(Vertex v) const;

  /// Reference run over all vertices in precedence order.
  Partition global_partition(const PhaseThresholds& k) const;
  Partition global_partition() const { return global_partition(thresholds()); }

  /// Anchors of every vertex through the local interface.
  Partition local_partition(unsigned threads = 1) const;

 private:
  struct Memo;

  const Graph* g_;
  OracleParams params_;
  SeedContext ctx_;
  std::unique_ptr<Memo> memo_;
};

/// Partition export: {"seed", "params", "anchors", "cut_edges"}.
nlohmann::json partition_to_json(const Graph& g, const Partition& p, std::uint64_t seed, const OracleParams& params);

/// Worker count from PO_THREADS (default 1).
unsigned thread_count_from_env();

}  // namespace po
