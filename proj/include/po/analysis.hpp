#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "po/graph.hpp"
#include "po/oracle.hpp"

namespace po {

struct CutReport {
  std::size_t n = 0;
  std::uint32_t d = 0;
  double epsilon = 0;
  std::size_t cut_edges = 0;
  double cut_fraction = 0;  ///< cut_edges / (d n)
  std::size_t pieces = 0;
  std::map<std::size_t, std::size_t> piece_size_histogram;
  double singleton_fraction = 0;  ///< fraction of vertices sitting in singleton pieces
  std::size_t max_piece = 0;

  nlohmann::json to_json() const;
};

CutReport measure_cut(const Graph& g, std::span<const VertexSet> pieces, double epsilon = 0);
CutReport measure_cut(const Graph& g, const Partition& p, double epsilon = 0);

/// F_h read off a global run: vertices not covered by any cluster of V_{<h}.
VertexSet free_set(const Partition& global, std::size_t h);

// ---------------------------------------------------------------------------
// Viability

struct ViabilityCensus {
  std::size_t h = 0;
  std::vector<Vertex> seeds;
  std::vector<std::size_t> k_candidates;
  /// viable[i][j]: seeds[j] is (h, k_candidates[i])-viable.
  std::vector<std::vector<bool>> viable;
  std::vector<std::size_t> viable_count;
  double quota = 0;
  std::size_t chosen_k = 0;
};

/// Marks (h, k)-viability of every seed against the free set F, with the same
/// predicate and decision rule findr uses. Passing findr's own trace seeds with
/// F = F_h reproduces its decision bit for bit.
ViabilityCensus viability_census(const PartitionOracle& oracle, std::size_t h, const VertexSet& free,
                                 std::span<const std::size_t> k_candidates, std::span<const Vertex> seeds);

/// All vertices of phase >= h, the exhaustive seed set.
std::vector<Vertex> seeds_at_least(const PartitionOracle& oracle, std::size_t h);

// ---------------------------------------------------------------------------
// Leaking timesteps

struct LeakyRow {
  Vertex s = 0;
  std::size_t t = 0;
  bool leaking = true;
  std::optional<std::size_t> certificate_k;  ///< smallest certifying level set size
  std::optional<double> conductance;         ///< Phi of that level set
};

struct LeakyOptions {
  /// Conductance bound a certificate must beat; defaults to 1/(d ell^{1/3}).
  std::optional<double> phi_threshold;
};

/// Classifies t = 1..ell for source s. Step t is non-leaking when some level set
/// L(k) inside the support, other than V, has |L & F| >= alpha^2 k / 400 and
/// Phi(L) below the threshold.
std::vector<LeakyRow> leaky_census(const PartitionOracle& oracle, Vertex s, const VertexSet& free,
                                   const LeakyOptions& opts = {});

// ---------------------------------------------------------------------------
// Good seeds

struct GoodSeedCensus {
  std::size_t good = 0;
  std::vector<std::pair<Vertex, std::size_t>> timesteps;  ///< (s, #qualifying t) for s in F
};

/// Counts s in F with at least beta ell / 8 steps t in [1, ell] at which the
/// truncated diffusion from s puts mass >= beta / 16 on F.
GoodSeedCensus good_seed_census(const PartitionOracle& oracle, const VertexSet& free);

// ---------------------------------------------------------------------------
// Heavy buckets (diagnostic)

struct Bucket {
  std::size_t r = 0;  ///< ranks [2^r, 2^{r+1}), 1-based
  double free_mass = 0;
  bool heavy = false;
};

std::vector<Bucket> heavy_buckets(const DiffusionStep& step, const VertexSet& free, double alpha);

// ---------------------------------------------------------------------------
// Local/global audit

struct Divergence {
  Vertex v = 0;
  VertexSet local;
  VertexSet global;
};

struct DifferentialReport {
  std::size_t checked = 0;
  std::size_t divergences = 0;
  std::optional<Divergence> first;

  bool ok() const { return divergences == 0; }
  nlohmann::json to_json() const;
};

using PieceQuery = std::function<VertexSet(Vertex)>;

/// Compares query(v) with v's global piece for every vertex.
DifferentialReport differential_check(const Graph& g, const Partition& global, const PieceQuery& query);
DifferentialReport differential_check(const PartitionOracle& oracle);

// ---------------------------------------------------------------------------
// Emission

/// Header: s,t,leaking,certificate_k,conductance
void write_leaky_csv(std::ostream& out, std::span<const LeakyRow> rows);
/// Header: h,k,seeds,viable,quota,chosen
void write_viability_csv(std::ostream& out, const ViabilityCensus& c);

}  // namespace po
