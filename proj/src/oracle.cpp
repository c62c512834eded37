#include "po/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <thread>

namespace po {

namespace {

constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();
constexpr std::size_t kShards = 64;

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, n))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

}  // namespace

std::size_t PhaseThresholds::max() const {
  return k.empty() ? 0 : *std::max_element(k.begin(), k.end());
}

// ---------------------------------------------------------------------------
// Partition

std::vector<std::size_t> Partition::piece_index(const Graph& g) const {
  const std::size_t n = g.num_vertices();
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> idx(n, unset);
  std::size_t next = 0;
  std::queue<Vertex> q;
  for (Vertex s = 0; s < n; ++s) {
    if (idx[s] != unset) continue;
    idx[s] = next;
    q.push(s);
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop();
      for (Vertex w : g.neighbors(u)) {
        if (idx[w] == unset && anchor[w] == anchor[s]) {
          idx[w] = next;
          q.push(w);
        }
      }
    }
    ++next;
  }
  return idx;
}

std::vector<VertexSet> Partition::pieces(const Graph& g) const {
  const auto idx = piece_index(g);
  std::size_t count = 0;
  for (auto i : idx) count = std::max(count, i + 1);
  std::vector<VertexSet> out(count);
  for (Vertex v = 0; v < idx.size(); ++v) out[idx[v]].push_back(v);
  return out;
}

std::size_t Partition::cut_edges(const Graph& g) const {
  std::size_t cut = 0;
  for (auto [u, v] : g.edges()) {
    if (anchor[u] != anchor[v]) ++cut;
  }
  return cut;
}

// ---------------------------------------------------------------------------
// cluster

VertexSet cluster_from_step(const Graph& g, const DiffusionStep& step, Vertex v, std::size_t k, double phi) {
  if (k == 0 || !step.contains(v)) return {v};
  const std::size_t n = g.num_vertices();
  const std::size_t top = std::min(2 * k, step.ranked.size());
  if (top < k) return {v};

  // Prefix boundary counts of the ranking, grown one vertex at a time.
  std::unordered_map<Vertex, std::size_t> rank;
  rank.reserve(top * 2);
  std::vector<std::size_t> cut(top + 1, 0);
  std::size_t v_rank = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < top; ++i) {
    const Vertex u = step.ranked[i];
    std::size_t inside = 0;
    for (Vertex w : g.neighbors(u)) {
      if (rank.contains(w)) ++inside;
    }
    cut[i + 1] = cut[i] + g.degree(u) - 2 * inside;
    rank.emplace(u, i);
    if (u == v) v_rank = i;
  }
  // Number of v's neighbours among the first j ranked vertices.
  auto v_links = [&](std::size_t j) {
    std::size_t c = 0;
    for (Vertex w : g.neighbors(v)) {
      auto it = rank.find(w);
      if (it != rank.end() && it->second < j) ++c;
    }
    return c;
  };

  for (std::size_t kp = top; kp >= k && kp >= 1; --kp) {
    const bool has_v = v_rank < kp;
    const std::size_t size = kp + (has_v ? 0 : 1);
    if (size < k || size > 2 * k || size >= n) continue;
    const std::size_t c = has_v ? cut[kp] : cut[kp] + g.degree(v) - 2 * v_links(kp);
    if (conductance_from_cut(g, c, size).at_most(phi)) {
      VertexSet out(step.ranked.begin(), step.ranked.begin() + static_cast<std::ptrdiff_t>(kp));
      if (!has_v) out.push_back(v);
      std::sort(out.begin(), out.end());
      return out;
    }
  }
  return {v};
}

VertexSet cluster(const Graph& g, const OracleParams& params, Vertex v, std::size_t t, std::size_t k) {
  const auto traj = truncated_trajectory(g, v, t, params.rho, params.arithmetic);
  return cluster_from_step(g, traj.back(), v, k, params.phi);
}

bool is_viable(std::size_t cluster_size, std::size_t free_members, std::size_t k, double beta) {
  return cluster_size > 1 && static_cast<double>(free_members) >= beta * beta * beta * static_cast<double>(k);
}

std::size_t choose_threshold(std::span<const std::size_t> k_candidates, std::span<const std::size_t> viable,
                             double quota) {
  std::size_t best_k = 0;
  std::size_t best_score = 0;
  for (std::size_t i = 0; i < k_candidates.size(); ++i) {
    if (viable[i] == 0 || static_cast<double>(viable[i]) < quota) continue;
    const std::size_t score = viable[i] * k_candidates[i];
    if (score >= best_score) {
      best_score = score;
      best_k = k_candidates[i];
    }
  }
  return best_k;
}

// ---------------------------------------------------------------------------
// PartitionOracle

struct PartitionOracle::Memo {
  explicit Memo(std::size_t n)
      : traj_once(new std::once_flag[n]), traj(n), ib_once(new std::once_flag[n]), ib(n), anchor(n) {
    for (auto& a : anchor) a.store(kNoVertex, std::memory_order_relaxed);
  }

  std::unique_ptr<std::once_flag[]> traj_once;
  std::vector<std::vector<DiffusionStep>> traj;
  std::unique_ptr<std::once_flag[]> ib_once;
  std::vector<VertexSet> ib;

  struct Shard {
    std::mutex mu;
    std::unordered_map<std::uint64_t, VertexSet> clusters;
  };
  std::array<Shard, kShards> shards;

  std::once_flag findr_once;
  std::optional<FindrResult> findr;

  std::vector<std::atomic<Vertex>> anchor;
};

PartitionOracle::PartitionOracle(const Graph& g, OracleParams params, std::uint64_t master_seed)
    : g_(&g), params_(std::move(params)), ctx_(master_seed, params_) {
  validate(params_);
  if (!params_.executable()) {
    throw ParamError("parameters are not executable at this scale (paper-formula values); use explicit mode");
  }
  if (g.num_vertices() >= kNoVertex) throw GraphError("graph too large");
  if (g.degree_bound() > params_.d) {
    throw ParamError("graph degree bound " + std::to_string(g.degree_bound()) + " exceeds params d = " +
                     std::to_string(params_.d));
  }
  memo_ = std::make_unique<Memo>(g.num_vertices());
}

PartitionOracle::~PartitionOracle() = default;

const std::vector<DiffusionStep>& PartitionOracle::trajectory(Vertex v) const {
  if (v >= g_->num_vertices()) throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
  std::call_once(memo_->traj_once[v], [&] {
    memo_->traj[v] = truncated_trajectory(*g_, v, params_.ell, params_.rho, params_.arithmetic);
  });
  return memo_->traj[v];
}

VertexSet PartitionOracle::cluster(Vertex v, std::size_t t, std::size_t k) const {
  if (t <= params_.ell) return cluster_from_step(*g_, trajectory(v)[t], v, k, params_.phi);
  return po::cluster(*g_, params_, v, t, k);
}

const VertexSet& PartitionOracle::seed_cluster(Vertex s, std::size_t k) const {
  const std::uint64_t key = (static_cast<std::uint64_t>(s) << 32) | static_cast<std::uint64_t>(k);
  auto& shard = memo_->shards[s % kShards];
  {
    std::lock_guard lock(shard.mu);
    if (auto it = shard.clusters.find(key); it != shard.clusters.end()) return it->second;
  }
  VertexSet c = cluster(s, ctx_.walk_len_of(s), k);
  std::lock_guard lock(shard.mu);
  return shard.clusters.try_emplace(key, std::move(c)).first->second;
}

const VertexSet& PartitionOracle::find_ib(Vertex v) const {
  if (v >= g_->num_vertices()) throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
  std::call_once(memo_->ib_once[v], [&] {
    VertexSet s{v};
    for (std::size_t t = 1; t <= params_.ell; ++t) {
      VertexSet frontier = s;
      for (Vertex u : s) {
        for (Vertex w : g_->neighbors(u)) frontier.push_back(w);
      }
      std::sort(frontier.begin(), frontier.end());
      frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
      VertexSet added;
      for (Vertex w : frontier) {
        if (!contains(s, w) && trajectory(w)[t].contains(v)) added.push_back(w);
      }
      if (!added.empty()) {
        VertexSet merged;
        std::merge(s.begin(), s.end(), added.begin(), added.end(), std::back_inserter(merged));
        s = std::move(merged);
      }
    }
    memo_->ib[v] = std::move(s);
  });
  return memo_->ib[v];
}

bool PartitionOracle::is_free(Vertex u, std::size_t h, const PhaseThresholds& k) const {
  if (h == 1) return true;
  for (Vertex v : find_ib(u)) {
    const std::size_t hv = ctx_.phase_of(v);
    if (hv >= h) continue;
    if (contains(seed_cluster(v, k.at(hv)), u)) return false;
  }
  return true;
}

FindrResult PartitionOracle::run_findr() const {
  const std::size_t n = g_->num_vertices();
  const double beta = params_.beta;
  FindrResult out;
  out.thresholds.k.assign(params_.h_bar, 0);
  if (n == 0) return out;

  for (std::size_t h = 1; h <= params_.h_bar; ++h) {
    FindrPhaseTrace trace;
    trace.h = h;
    trace.viable.assign(params_.k_candidates.size(), 0);
    if (h == params_.h_bar) {
      out.phases.push_back(std::move(trace));
      continue;
    }
    std::vector<Vertex> sample;
    for (std::uint64_t j = 0; j < params_.sample_count; ++j) {
      const auto s = static_cast<Vertex>(to_bounded(ctx_.draw(Purpose::FindrSample, h, j), n));
      if (ctx_.phase_of(s) >= h) sample.push_back(s);
    }
    trace.in_phase = sample.size();
    if (static_cast<double>(sample.size()) <= static_cast<double>(params_.gate_count) / 2.0) {
      out.phases.push_back(std::move(trace));
      continue;
    }
    trace.gate_passed = true;
    if (sample.size() > params_.keep_count) sample.resize(params_.keep_count);
    trace.seeds = sample;

    std::unordered_map<Vertex, bool> free_memo;
    auto free_at_h = [&](Vertex u) {
      auto [it, fresh] = free_memo.try_emplace(u, false);
      if (fresh) it->second = is_free(u, h, out.thresholds);
      return it->second;
    };
    for (std::size_t ki = 0; ki < params_.k_candidates.size(); ++ki) {
      const std::size_t k = params_.k_candidates[ki];
      for (Vertex s : sample) {
        const VertexSet& c = seed_cluster(s, k);
        if (c.size() <= 1) continue;
        std::size_t free_members = 0;
        for (Vertex u : c) free_members += free_at_h(u) ? 1 : 0;
        if (is_viable(c.size(), free_members, k, beta)) ++trace.viable[ki];
      }
    }
    trace.quota = 12.0 * std::pow(beta, 4) * static_cast<double>(sample.size());
    trace.chosen_k = choose_threshold(params_.k_candidates, trace.viable, trace.quota);
    out.thresholds.k[h - 1] = trace.chosen_k;
    out.phases.push_back(std::move(trace));
  }
  return out;
}

const FindrResult& PartitionOracle::findr_result() const {
  std::call_once(memo_->findr_once, [&] { memo_->findr = run_findr(); });
  return *memo_->findr;
}

const PhaseThresholds& PartitionOracle::thresholds() const { return findr_result().thresholds; }

Vertex PartitionOracle::find_anchor(Vertex v, const PhaseThresholds& k) const {
  Vertex best = kNoVertex;
  for (Vertex s : find_ib(v)) {
    if (best != kNoVertex && !ctx_.precedes(s, best)) continue;
    if (contains(seed_cluster(s, k.at(ctx_.phase_of(s))), v)) best = s;
  }
  // v always qualifies through its own cluster.
  return best;
}

Vertex PartitionOracle::find_anchor(Vertex v) const {
  if (v >= g_->num_vertices()) throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
  Vertex a = memo_->anchor[v].load(std::memory_order_acquire);
  if (a == kNoVertex) {
    a = find_anchor(v, thresholds());
    memo_->anchor[v].store(a, std::memory_order_release);
  }
  return a;
}

namespace {

template <class AnchorFn>
VertexSet bfs_same_anchor(const Graph& g, Vertex v, AnchorFn&& anchor_of) {
  const Vertex s = anchor_of(v);
  std::vector<Vertex> seen{v};
  std::queue<Vertex> q;
  q.push(v);
  VertexSet piece;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop();
    piece.push_back(u);
    for (Vertex w : g.neighbors(u)) {
      if (std::find(seen.begin(), seen.end(), w) != seen.end()) continue;
      seen.push_back(w);
      if (anchor_of(w) == s) q.push(w);
    }
  }
  std::sort(piece.begin(), piece.end());
  return piece;
}

}  // namespace

VertexSet PartitionOracle::find_partition(Vertex v, const PhaseThresholds& k) const {
  if (v >= g_->num_vertices()) throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
  return bfs_same_anchor(*g_, v, [&](Vertex w) { return find_anchor(w, k); });
}

VertexSet PartitionOracle::find_partition(Vertex v) const {
  if (v >= g_->num_vertices()) throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
  return bfs_same_anchor(*g_, v, [&](Vertex w) { return find_anchor(w); });
}

Partition PartitionOracle::global_partition(const PhaseThresholds& k) const {
  const std::size_t n = g_->num_vertices();
  std::vector<Vertex> order(n);
  std::vector<std::size_t> phase(n);
  for (Vertex v = 0; v < n; ++v) {
    order[v] = v;
    phase[v] = ctx_.phase_of(v);
  }
  std::sort(order.begin(), order.end(),
            [&](Vertex a, Vertex b) { return phase[a] != phase[b] ? phase[a] < phase[b] : a < b; });

  // Clusters do not depend on the free set, so they can be computed up front.
  std::vector<const VertexSet*> clusters(n);
  parallel_for(n, thread_count_from_env(),
               [&](std::size_t v) { clusters[v] = &seed_cluster(static_cast<Vertex>(v), k.at(phase[v])); });

  Partition p;
  p.anchor.assign(n, kNoVertex);
  p.removed_in_phase.assign(n, std::numeric_limits<std::size_t>::max());
  for (Vertex v : order) {
    for (Vertex u : *clusters[v]) {
      if (p.anchor[u] == kNoVertex) {
        p.anchor[u] = v;
        p.removed_in_phase[u] = phase[v];
      }
    }
  }
  return p;
}

Partition PartitionOracle::local_partition(unsigned threads) const {
  const std::size_t n = g_->num_vertices();
  thresholds();
  Partition p;
  p.anchor.assign(n, kNoVertex);
  parallel_for(n, threads, [&](std::size_t v) { p.anchor[v] = find_anchor(static_cast<Vertex>(v)); });
  return p;
}

nlohmann::json partition_to_json(const Graph& g, const Partition& p, std::uint64_t seed, const OracleParams& params) {
  nlohmann::json j;
  j["seed"] = seed;
  j["params"] = params.to_json();
  j["anchors"] = p.anchor;
  j["cut_edges"] = p.cut_edges(g);
  return j;
}

unsigned thread_count_from_env() {
  if (const char* s = std::getenv("PO_THREADS")) {
    try {
      const int v = std::stoi(s);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace po
