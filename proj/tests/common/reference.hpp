#pragma once

// Test corpus and brute-force reference implementations. These are written
// against the definitions directly and share no code paths with the oracle's
// memoised machinery beyond the diffusion templates.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "po/diffusion.hpp"
#include "po/graph.hpp"
#include "po/oracle.hpp"
#include "po/params.hpp"

namespace po::ref {

struct CorpusEntry {
  std::string name;
  Graph g;
  std::uint64_t seed;
};

/// Grids, triangulated grids, bridged cycles, random trees and a few extra
/// shapes with 1 <= n <= 200, each paired with a seed.
inline std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> c;
  auto add = [&](std::string name, Graph g) {
    const auto seed = 1000 + 7 * static_cast<std::uint64_t>(c.size());
    c.push_back({std::move(name), std::move(g), seed});
  };
  add("grid1x1", gen_grid(1, 1));
  add("grid1x3", gen_grid(1, 3));
  add("grid2x2", gen_grid(2, 2));
  add("grid3x3", gen_grid(3, 3));
  add("grid5x5", gen_grid(5, 5));
  add("grid8x8", gen_grid(8, 8));
  add("grid10x10", gen_grid(10, 10));
  add("grid12x15", gen_grid(12, 15));
  add("grid14x14", gen_grid(14, 14));
  add("tri2x2", gen_triangulated_grid(2, 2));
  add("tri3x3", gen_triangulated_grid(3, 3));
  add("tri6x6", gen_triangulated_grid(6, 6));
  add("tri8x8", gen_triangulated_grid(8, 8));
  add("tri12x12", gen_triangulated_grid(12, 12));
  add("bridge3", gen_bridged_cycles(3));
  add("bridge4", gen_bridged_cycles(4));
  add("bridge5", gen_bridged_cycles(5));
  add("bridge10", gen_bridged_cycles(10));
  add("bridge25", gen_bridged_cycles(25));
  add("tree1", gen_random_tree(1, 3, 5));
  add("tree5", gen_random_tree(5, 2, 5));
  add("tree30", gen_random_tree(30, 3, 11));
  add("tree64", gen_random_tree(64, 3, 12));
  add("tree100", gen_random_tree(100, 4, 13));
  add("tree200", gen_random_tree(200, 3, 14));
  add("cycle8", gen_cycle(8));
  add("path50", gen_path(50));
  // Same graphs under other seeds.
  add("grid10x10b", gen_grid(10, 10));
  add("bridge10b", gen_bridged_cycles(10));
  add("tree100b", gen_random_tree(100, 4, 13));
  return c;
}

/// Explicit parameters of the equivalence suite for a graph of degree bound d.
inline OracleParams corpus_params(const Graph& g) {
  return derive_params(0.1, std::max<std::uint32_t>(2, g.degree_bound()), ParamMode::Explicit,
                       {{"ell", "20"},
                        {"rho", "0.001"},
                        {"phi", "0.2"},
                        {"beta", "0.1"},
                        {"delta", "0.2"},
                        {"h_bar", "10"},
                        {"k_candidates", "1..50"}});
}

/// supp of the truncated diffusion from w at every t in [0, ell].
inline std::vector<VertexSet> supports(const Graph& g, Vertex w, std::size_t ell, double rho) {
  std::vector<VertexSet> out;
  auto p = MassVector<double>::unit(w);
  out.push_back(p.support());
  for (std::size_t t = 1; t <= ell; ++t) {
    p = truncate(lazy_step(g, p), rho);
    out.push_back(p.support());
  }
  return out;
}

/// {w : v in supp(M^t w) for some t <= ell}, by enumeration over all w.
inline std::vector<VertexSet> inverse_balls(const Graph& g, std::size_t ell, double rho) {
  std::vector<VertexSet> ib(g.num_vertices());
  for (Vertex w = 0; w < g.num_vertices(); ++w) {
    VertexSet reached;
    for (const auto& s : supports(g, w, ell, rho)) reached.insert(reached.end(), s.begin(), s.end());
    std::sort(reached.begin(), reached.end());
    reached.erase(std::unique(reached.begin(), reached.end()), reached.end());
    for (Vertex v : reached) ib[v].push_back(w);
  }
  return ib;
}

/// Direct transcription of the cluster rule over explicit level sets.
template <class Mass>
VertexSet cluster(const Graph& g, const MassVector<Mass>& p, Vertex v, std::size_t k, double phi) {
  const std::size_t n = g.num_vertices();
  if (k == 0 || !p.in_support(v)) return {v};
  const VertexSet supp = p.support();
  for (std::size_t kp = std::min(2 * k, n); kp >= k && kp >= 1; --kp) {
    VertexSet c = level_set(p, kp, n);
    if (!contains(c, v)) {
      c.push_back(v);
      std::sort(c.begin(), c.end());
    }
    if (c.size() < k || c.size() > 2 * k || c.size() == n) continue;
    if (!std::includes(supp.begin(), supp.end(), c.begin(), c.end())) continue;
    if (conductance(g, c).at_most(phi)) return c;
  }
  return {v};
}

struct GlobalRun {
  std::vector<Vertex> anchor;
  std::vector<std::size_t> removed_in_phase;
  std::vector<VertexSet> pieces;  // ordered by smallest member
};

/// The reference global run: vertices in (phase, id) order; each adds the
/// components of C & F as pieces anchored at itself and removes C from F.
inline GlobalRun global_run(const Graph& g, const OracleParams& params, const SeedContext& ctx,
                            const PhaseThresholds& k) {
  const std::size_t n = g.num_vertices();
  std::vector<Vertex> order(n);
  for (Vertex v = 0; v < n; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    const auto ha = ctx.phase_of(a);
    const auto hb = ctx.phase_of(b);
    return ha != hb ? ha < hb : a < b;
  });
  GlobalRun r;
  r.anchor.assign(n, ~Vertex{0});
  r.removed_in_phase.assign(n, 0);
  std::vector<bool> free(n, true);
  for (Vertex v : order) {
    const auto h = ctx.phase_of(v);
    const auto p = truncated_diffusion(g, v, ctx.walk_len_of(v), params.rho);
    const VertexSet c = cluster(g, p, v, k.at(h), params.phi);
    VertexSet cf;
    for (Vertex u : c) {
      if (free[u]) cf.push_back(u);
    }
    for (auto& comp : induced_components(g, cf)) {
      for (Vertex u : comp) {
        r.anchor[u] = v;
        r.removed_in_phase[u] = h;
      }
      r.pieces.push_back(std::move(comp));
    }
    for (Vertex u : c) free[u] = false;
  }
  std::sort(r.pieces.begin(), r.pieces.end());
  return r;
}

/// F_h: vertices covered by no cluster of a phase < h seed.
inline std::vector<bool> free_at(const Graph& g, const OracleParams& params, const SeedContext& ctx,
                                 const PhaseThresholds& k, std::size_t h) {
  std::vector<bool> free(g.num_vertices(), true);
  for (Vertex w = 0; w < g.num_vertices(); ++w) {
    const auto hw = ctx.phase_of(w);
    if (hw >= h) continue;
    const auto p = truncated_diffusion(g, w, ctx.walk_len_of(w), params.rho);
    for (Vertex u : cluster(g, p, w, k.at(hw), params.phi)) free[u] = false;
  }
  return free;
}

/// findr recomputed from the definitions: per phase, sample, gate, keep, count
/// viable seeds against F_h and apply the shared decision rule.
inline FindrResult findr(const Graph& g, const OracleParams& params, const SeedContext& ctx) {
  const std::size_t n = g.num_vertices();
  FindrResult out;
  out.thresholds.k.assign(params.h_bar, 0);
  for (std::size_t h = 1; h <= params.h_bar; ++h) {
    FindrPhaseTrace tr;
    tr.h = h;
    tr.viable.assign(params.k_candidates.size(), 0);
    if (h < params.h_bar && n > 0) {
      std::vector<Vertex> sample;
      for (std::uint64_t j = 0; j < params.sample_count; ++j) {
        const auto s = static_cast<Vertex>(to_bounded(ctx.draw(Purpose::FindrSample, h, j), n));
        if (ctx.phase_of(s) >= h) sample.push_back(s);
      }
      tr.in_phase = sample.size();
      if (2.0 * static_cast<double>(sample.size()) > static_cast<double>(params.gate_count)) {
        tr.gate_passed = true;
        if (sample.size() > params.keep_count) sample.resize(params.keep_count);
        tr.seeds = sample;
        const auto free = free_at(g, params, ctx, out.thresholds, h);
        std::map<Vertex, MassVector<double>> diffusions;
        for (Vertex s : sample) diffusions.try_emplace(s, truncated_diffusion(g, s, ctx.walk_len_of(s), params.rho));
        for (std::size_t i = 0; i < params.k_candidates.size(); ++i) {
          const std::size_t k = params.k_candidates[i];
          for (Vertex s : sample) {
            const VertexSet c = cluster(g, diffusions.at(s), s, k, params.phi);
            std::size_t in_free = 0;
            for (Vertex u : c) in_free += free[u] ? 1 : 0;
            if (c.size() > 1 && static_cast<double>(in_free) >= params.beta * params.beta * params.beta * k) {
              ++tr.viable[i];
            }
          }
        }
        tr.quota = 12.0 * std::pow(params.beta, 4) * static_cast<double>(sample.size());
        tr.chosen_k = choose_threshold(params.k_candidates, tr.viable, tr.quota);
        out.thresholds.k[h - 1] = tr.chosen_k;
      }
    }
    out.phases.push_back(std::move(tr));
  }
  return out;
}

/// Pieces of a partition given as per-vertex piece sets, deduplicated and sorted.
inline std::vector<VertexSet> distinct(std::vector<VertexSet> pieces) {
  std::sort(pieces.begin(), pieces.end());
  pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());
  return pieces;
}

}  // namespace po::ref
