#include "po/analysis.hpp"

#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <unordered_map>

namespace po {

nlohmann::json CutReport::to_json() const {
  nlohmann::json hist = nlohmann::json::object();
  for (auto [size, count] : piece_size_histogram) hist[std::to_string(size)] = count;
  return {{"n", n},
          {"d", d},
          {"epsilon", epsilon},
          {"cut_edges", cut_edges},
          {"cut_fraction", cut_fraction},
          {"pieces", pieces},
          {"max_piece", max_piece},
          {"singleton_fraction", singleton_fraction},
          {"piece_size_histogram", hist}};
}

CutReport measure_cut(const Graph& g, std::span<const VertexSet> pieces, double epsilon) {
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> idx(n, std::numeric_limits<std::size_t>::max());
  CutReport r;
  r.n = n;
  r.d = g.degree_bound();
  r.epsilon = epsilon;
  r.pieces = pieces.size();
  std::size_t singletons = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (Vertex v : pieces[i]) {
      if (idx.at(v) != std::numeric_limits<std::size_t>::max()) {
        throw std::invalid_argument("measure_cut: vertex " + std::to_string(v) + " lies in two pieces");
      }
      idx[v] = i;
    }
    ++r.piece_size_histogram[pieces[i].size()];
    r.max_piece = std::max(r.max_piece, pieces[i].size());
    if (pieces[i].size() == 1) ++singletons;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (idx[v] == std::numeric_limits<std::size_t>::max()) {
      throw std::invalid_argument("measure_cut: vertex " + std::to_string(v) + " is in no piece");
    }
  }
  for (auto [u, v] : g.edges()) {
    if (idx[u] != idx[v]) ++r.cut_edges;
  }
  if (n > 0) {
    r.cut_fraction = static_cast<double>(r.cut_edges) / (static_cast<double>(r.d) * static_cast<double>(n));
    r.singleton_fraction = static_cast<double>(singletons) / static_cast<double>(n);
  }
  return r;
}

CutReport measure_cut(const Graph& g, const Partition& p, double epsilon) {
  const auto pieces = p.pieces(g);
  return measure_cut(g, pieces, epsilon);
}

VertexSet free_set(const Partition& global, std::size_t h) {
  if (global.removed_in_phase.size() != global.anchor.size()) {
    throw std::invalid_argument("free_set needs a partition from a global run");
  }
  VertexSet f;
  for (Vertex u = 0; u < global.removed_in_phase.size(); ++u) {
    if (global.removed_in_phase[u] >= h) f.push_back(u);
  }
  return f;
}

// ---------------------------------------------------------------------------

ViabilityCensus viability_census(const PartitionOracle& oracle, std::size_t h, const VertexSet& free,
                                 std::span<const std::size_t> k_candidates, std::span<const Vertex> seeds) {
  const double beta = oracle.params().beta;
  ViabilityCensus c;
  c.h = h;
  c.seeds.assign(seeds.begin(), seeds.end());
  c.k_candidates.assign(k_candidates.begin(), k_candidates.end());
  c.viable.assign(k_candidates.size(), std::vector<bool>(seeds.size(), false));
  c.viable_count.assign(k_candidates.size(), 0);
  for (std::size_t i = 0; i < k_candidates.size(); ++i) {
    for (std::size_t j = 0; j < seeds.size(); ++j) {
      const VertexSet& cl = oracle.seed_cluster(seeds[j], k_candidates[i]);
      std::size_t in_free = 0;
      for (Vertex u : cl) in_free += contains(free, u) ? 1 : 0;
      if (is_viable(cl.size(), in_free, k_candidates[i], beta)) {
        c.viable[i][j] = true;
        ++c.viable_count[i];
      }
    }
  }
  c.quota = 12.0 * std::pow(beta, 4) * static_cast<double>(seeds.size());
  c.chosen_k = choose_threshold(c.k_candidates, c.viable_count, c.quota);
  return c;
}

std::vector<Vertex> seeds_at_least(const PartitionOracle& oracle, std::size_t h) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < oracle.graph().num_vertices(); ++v) {
    if (oracle.phase_of(v) >= h) out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<LeakyRow> leaky_census(const PartitionOracle& oracle, Vertex s, const VertexSet& free,
                                   const LeakyOptions& opts) {
  const Graph& g = oracle.graph();
  const OracleParams& p = oracle.params();
  const std::size_t n = g.num_vertices();
  const double threshold =
      opts.phi_threshold.value_or(1.0 / (static_cast<double>(p.d) * std::cbrt(static_cast<double>(p.ell))));
  const double gate = p.alpha * p.alpha / 400.0;
  const auto& traj = oracle.trajectory(s);

  std::vector<LeakyRow> rows;
  rows.reserve(p.ell);
  for (std::size_t t = 1; t <= p.ell; ++t) {
    LeakyRow row;
    row.s = s;
    row.t = t;
    const auto& ranked = traj[t].ranked;
    const std::size_t top = std::min({p.max_k(), ranked.size(), n - 1});
    std::unordered_map<Vertex, bool> inside;
    std::size_t cut = 0;
    std::size_t in_free = 0;
    for (std::size_t k = 1; k <= top; ++k) {
      const Vertex u = ranked[k - 1];
      std::size_t links = 0;
      for (Vertex w : g.neighbors(u)) links += inside.contains(w) ? 1 : 0;
      cut = cut + g.degree(u) - 2 * links;
      inside.emplace(u, true);
      in_free += contains(free, u) ? 1 : 0;
      if (static_cast<double>(in_free) < gate * static_cast<double>(k)) continue;
      const auto phi = conductance_from_cut(g, cut, k);
      if (phi.below(threshold)) {
        row.leaking = false;
        row.certificate_k = k;
        row.conductance = phi.value();
        break;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------

GoodSeedCensus good_seed_census(const PartitionOracle& oracle, const VertexSet& free) {
  const OracleParams& p = oracle.params();
  const double need_steps = p.beta * static_cast<double>(p.ell) / 8.0;
  const double need_mass = p.beta / 16.0;
  GoodSeedCensus c;
  for (Vertex s : free) {
    const auto& traj = oracle.trajectory(s);
    std::size_t steps = 0;
    for (std::size_t t = 1; t <= p.ell; ++t) {
      double mass = 0;
      for (std::size_t i = 0; i < traj[t].ranked.size(); ++i) {
        if (contains(free, traj[t].ranked[i])) mass += traj[t].mass[i];
      }
      if (mass >= need_mass) ++steps;
    }
    c.timesteps.emplace_back(s, steps);
    if (static_cast<double>(steps) >= need_steps) ++c.good;
  }
  return c;
}

// ---------------------------------------------------------------------------

std::vector<Bucket> heavy_buckets(const DiffusionStep& step, const VertexSet& free, double alpha) {
  std::vector<Bucket> out;
  for (std::size_t rank = 1; rank <= step.ranked.size(); ++rank) {
    const auto r = static_cast<std::size_t>(std::bit_width(rank) - 1);
    if (out.size() <= r) out.push_back({r, 0.0, false});
    if (contains(free, step.ranked[rank - 1])) out[r].free_mass += step.mass[rank - 1];
  }
  for (auto& b : out) b.heavy = b.free_mass >= alpha;
  return out;
}

// ---------------------------------------------------------------------------

nlohmann::json DifferentialReport::to_json() const {
  nlohmann::json j{{"checked", checked}, {"divergences", divergences}};
  if (first) j["first"] = {{"v", first->v}, {"local", first->local}, {"global", first->global}};
  return j;
}

DifferentialReport differential_check(const Graph& g, const Partition& global, const PieceQuery& query) {
  const auto pieces = global.pieces(g);
  const auto idx = global.piece_index(g);
  DifferentialReport r;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    ++r.checked;
    VertexSet local = query(v);
    if (local != pieces[idx[v]]) {
      if (!r.first) r.first = Divergence{v, std::move(local), pieces[idx[v]]};
      ++r.divergences;
    }
  }
  return r;
}

DifferentialReport differential_check(const PartitionOracle& oracle) {
  return differential_check(oracle.graph(), oracle.global_partition(),
                            [&](Vertex v) { return oracle.find_partition(v); });
}

// ---------------------------------------------------------------------------

void write_leaky_csv(std::ostream& out, std::span<const LeakyRow> rows) {
  out << "s,t,leaking,certificate_k,conductance\n";
  for (const auto& r : rows) {
    out << r.s << ',' << r.t << ',' << (r.leaking ? 1 : 0) << ',';
    if (r.certificate_k) out << *r.certificate_k;
    out << ',';
    if (r.conductance) out << std::setprecision(17) << *r.conductance;
    out << '\n';
  }
}

void write_viability_csv(std::ostream& out, const ViabilityCensus& c) {
  out << "h,k,seeds,viable,quota,chosen\n";
  for (std::size_t i = 0; i < c.k_candidates.size(); ++i) {
    out << c.h << ',' << c.k_candidates[i] << ',' << c.seeds.size() << ',' << c.viable_count[i] << ','
        << std::setprecision(17) << c.quota << ',' << (c.k_candidates[i] == c.chosen_k ? 1 : 0) << '\n';
  }
}

}  // namespace po
