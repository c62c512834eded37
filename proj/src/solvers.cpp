#include "po/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

namespace po {

namespace {

using Mask = std::uint64_t;

void require_branch_size(const Graph& g, const char* what) {
  if (g.num_vertices() > kMaxBranchVertices) {
    throw SolverError(std::string(what) + ": " + std::to_string(g.num_vertices()) + " vertices exceeds the limit of " +
                      std::to_string(kMaxBranchVertices));
  }
}

std::vector<Mask> neighbor_masks(const Graph& g) {
  std::vector<Mask> nb(g.num_vertices(), 0);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    for (Vertex w : g.neighbors(v)) nb[v] |= Mask{1} << w;
  }
  return nb;
}

Mask all_of(std::size_t n) { return n == 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

// ---------------------------------------------------------------------------
// Blossom

class Blossom {
 public:
  explicit Blossom(const Graph& g)
      : g_(g), n_(g.num_vertices()), match_(n_, kNone), parent_(n_), base_(n_), used_(n_), blossom_(n_) {}

  std::size_t run() {
    // Greedy start keeps the augmenting phase short.
    for (Vertex v = 0; v < n_; ++v) {
      if (match_[v] != kNone) continue;
      for (Vertex w : g_.neighbors(v)) {
        if (match_[w] == kNone) {
          match_[v] = w;
          match_[w] = v;
          break;
        }
      }
    }
    for (Vertex v = 0; v < n_; ++v) {
      if (match_[v] != kNone) continue;
      Vertex u = find_path(v);
      while (u != kNone) {
        const Vertex pv = parent_[u];
        const Vertex ppv = match_[pv];
        match_[u] = pv;
        match_[pv] = u;
        u = ppv;
      }
    }
    std::size_t m = 0;
    for (Vertex v = 0; v < n_; ++v) m += match_[v] != kNone ? 1 : 0;
    return m / 2;
  }

 private:
  static constexpr Vertex kNone = ~Vertex{0};

  Vertex lca(Vertex a, Vertex b) {
    std::vector<bool> seen(n_, false);
    for (;;) {
      a = base_[a];
      seen[a] = true;
      if (match_[a] == kNone) break;
      a = parent_[match_[a]];
    }
    for (;;) {
      b = base_[b];
      if (seen[b]) return b;
      b = parent_[match_[b]];
    }
  }

  void mark_path(Vertex v, Vertex b, Vertex child) {
    while (base_[v] != b) {
      blossom_[base_[v]] = blossom_[base_[match_[v]]] = true;
      parent_[v] = child;
      child = match_[v];
      v = parent_[match_[v]];
    }
  }

  Vertex find_path(Vertex root) {
    std::fill(used_.begin(), used_.end(), false);
    std::fill(parent_.begin(), parent_.end(), kNone);
    for (Vertex i = 0; i < n_; ++i) base_[i] = i;
    used_[root] = true;
    std::queue<Vertex> q;
    q.push(root);
    while (!q.empty()) {
      const Vertex v = q.front();
      q.pop();
      for (Vertex to : g_.neighbors(v)) {
        if (base_[v] == base_[to] || match_[v] == to) continue;
        if (to == root || (match_[to] != kNone && parent_[match_[to]] != kNone)) {
          const Vertex cur = lca(v, to);
          std::fill(blossom_.begin(), blossom_.end(), false);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (Vertex i = 0; i < n_; ++i) {
            if (blossom_[base_[i]]) {
              base_[i] = cur;
              if (!used_[i]) {
                used_[i] = true;
                q.push(i);
              }
            }
          }
        } else if (parent_[to] == kNone) {
          parent_[to] = v;
          if (match_[to] == kNone) return to;
          used_[match_[to]] = true;
          q.push(match_[to]);
        }
      }
    }
    return kNone;
  }

  const Graph& g_;
  Vertex n_;
  std::vector<Vertex> match_, parent_, base_;
  std::vector<bool> used_, blossom_;
};

// ---------------------------------------------------------------------------
// Independent set

class IndependentSet {
 public:
  explicit IndependentSet(const Graph& g) : nb_(neighbor_masks(g)), n_(g.num_vertices()) {}

  std::size_t run() { return solve(all_of(n_)); }

 private:
  std::size_t solve(Mask p) {
    if (p == 0) return 0;
    if (auto it = memo_.find(p); it != memo_.end()) return it->second;
    // Vertices of degree <= 1 inside p can always be taken.
    int best_v = -1;
    int best_deg = -1;
    for (Mask rest = p; rest != 0; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      const int deg = std::popcount(nb_[v] & p);
      if (deg <= 1) {
        const std::size_t r = 1 + solve(p & ~(nb_[v] | (Mask{1} << v)));
        memo_.emplace(p, r);
        return r;
      }
      if (deg > best_deg) {
        best_deg = deg;
        best_v = v;
      }
    }
    const Mask bit = Mask{1} << best_v;
    const std::size_t take = 1 + solve(p & ~(nb_[best_v] | bit));
    std::size_t r = take;
    if (static_cast<std::size_t>(std::popcount(p)) - 1 > take) r = std::max(r, solve(p & ~bit));
    memo_.emplace(p, r);
    return r;
  }

  std::vector<Mask> nb_;
  std::size_t n_;
  std::unordered_map<Mask, std::size_t> memo_;
};

// ---------------------------------------------------------------------------
// Dominating set

class DominatingSet {
 public:
  explicit DominatingSet(const Graph& g) : n_(g.num_vertices()) {
    const auto nb = neighbor_masks(g);
    closed_.resize(n_);
    max_cover_ = 1;
    for (std::size_t v = 0; v < n_; ++v) {
      closed_[v] = nb[v] | (Mask{1} << v);
      max_cover_ = std::max(max_cover_, static_cast<std::size_t>(std::popcount(closed_[v])));
    }
  }

  std::size_t run() {
    best_ = greedy();
    search(all_of(n_), 0);
    return best_;
  }

 private:
  std::size_t greedy() const {
    Mask undominated = all_of(n_);
    std::size_t used = 0;
    while (undominated != 0) {
      std::size_t pick = 0;
      int gain = -1;
      for (std::size_t v = 0; v < n_; ++v) {
        const int gv = std::popcount(closed_[v] & undominated);
        if (gv > gain) {
          gain = gv;
          pick = v;
        }
      }
      undominated &= ~closed_[pick];
      ++used;
    }
    return used;
  }

  void search(Mask undominated, std::size_t used) {
    if (undominated == 0) {
      best_ = std::min(best_, used);
      return;
    }
    const std::size_t lower = (static_cast<std::size_t>(std::popcount(undominated)) + max_cover_ - 1) / max_cover_;
    if (used + lower >= best_) return;
    // Branch on the undominated vertex with the fewest ways to be dominated.
    int pick = -1;
    int ways = 65;
    for (Mask rest = undominated; rest != 0; rest &= rest - 1) {
      const int u = std::countr_zero(rest);
      const int w = std::popcount(closed_[u]);
      if (w < ways) {
        ways = w;
        pick = u;
      }
    }
    std::vector<std::pair<int, int>> options;
    for (Mask rest = closed_[pick]; rest != 0; rest &= rest - 1) {
      const int w = std::countr_zero(rest);
      options.emplace_back(-std::popcount(closed_[w] & undominated), w);
    }
    std::sort(options.begin(), options.end());
    for (auto [gain, w] : options) search(undominated & ~closed_[w], used + 1);
  }

  std::size_t n_;
  std::vector<Mask> closed_;
  std::size_t max_cover_;
  std::size_t best_ = 0;
};

// ---------------------------------------------------------------------------
// Subgraph isomorphism

bool extend(const Graph& g, const Graph& h, std::vector<Vertex>& map, std::vector<bool>& used, std::size_t i) {
  if (i == h.num_vertices()) return true;
  for (Vertex x = 0; x < g.num_vertices(); ++x) {
    if (used[x] || g.degree(x) < h.degree(static_cast<Vertex>(i))) continue;
    bool ok = true;
    for (Vertex j : h.neighbors(static_cast<Vertex>(i))) {
      if (j < i && !g.has_edge(map[j], x)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    map[i] = x;
    used[x] = true;
    if (extend(g, h, map, used, i + 1)) return true;
    used[x] = false;
  }
  return false;
}

}  // namespace

std::size_t max_matching(const Graph& g) { return Blossom(g).run(); }

std::size_t max_independent_set(const Graph& g) {
  require_branch_size(g, "independent set");
  return IndependentSet(g).run();
}

std::size_t min_vertex_cover(const Graph& g) {
  require_branch_size(g, "vertex cover");
  return g.num_vertices() - IndependentSet(g).run();
}

std::size_t min_dominating_set(const Graph& g) {
  require_branch_size(g, "dominating set");
  if (g.num_vertices() == 0) return 0;
  return DominatingSet(g).run();
}

bool contains_subgraph(const Graph& g, const Graph& h) {
  if (h.num_vertices() > 5) throw SolverError("pattern graphs are limited to 5 vertices");
  if (h.num_vertices() > g.num_vertices()) return false;
  std::vector<Vertex> map(h.num_vertices());
  std::vector<bool> used(g.num_vertices(), false);
  return extend(g, h, map, used, 0);
}

bool is_triangle_free(const Graph& g) {
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    for (Vertex v : g.neighbors(u)) {
      if (v <= u) continue;
      for (Vertex w : g.neighbors(v)) {
        if (w > v && g.has_edge(u, w)) return false;
      }
    }
  }
  return true;
}

}  // namespace po
