#include "po/applications.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>

#include "po/solvers.hpp"

namespace po {

namespace {

std::uint64_t attempt_seed(std::uint64_t seed, std::size_t attempt) {
  return attempt == 0 ? seed : draw64(seed, Purpose::Reseed, attempt);
}

Graph piece_graph(const Graph& g, const VertexSet& piece, std::size_t cap) {
  if (piece.size() > cap) {
    throw SolverError("piece of " + std::to_string(piece.size()) + " vertices exceeds the cap of " +
                      std::to_string(cap) + "; lower the k candidates or raise the cap");
  }
  return induced_subgraph(g, piece);
}

}  // namespace

double estimate_cut_fraction(const PartitionOracle& oracle, std::size_t samples, std::uint64_t stream) {
  if (samples == 0) throw std::invalid_argument("estimate_cut_fraction: samples must be >= 1");
  const Graph& g = oracle.graph();
  const std::size_t n = g.num_vertices();
  if (n == 0) return 0;
  const std::uint32_t d = g.degree_bound();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto u = static_cast<Vertex>(to_bounded(oracle.seeds().draw(Purpose::CutProbeVertex, stream, i), n));
    const auto slot = to_bounded(oracle.seeds().draw(Purpose::CutProbeSlot, stream, i), d);
    if (slot >= g.degree(u)) continue;
    const Vertex w = g.neighbors(u)[slot];
    // Adjacent vertices share a piece exactly when they share an anchor.
    if (oracle.find_anchor(u) != oracle.find_anchor(w)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

// ---------------------------------------------------------------------------

std::size_t TesterConfig::probes(double eps) const {
  return static_cast<std::size_t>(std::ceil(probe_factor / eps - 1e-9));
}

std::size_t TesterConfig::vertices(double eps) const {
  return static_cast<std::size_t>(std::ceil(vertex_factor / eps - 1e-9));
}

nlohmann::json TesterConfig::to_json() const {
  nlohmann::json j{{"seed_retries", seed_retries},
                   {"probe_factor", probe_factor},
                   {"vertex_factor", vertex_factor},
                   {"piece_cap", piece_cap}};
  j["cut_threshold"] = cut_threshold ? nlohmann::json(*cut_threshold) : nlohmann::json(nullptr);
  return j;
}

TesterConfig TesterConfig::from_json(const nlohmann::json& j) {
  static const std::set<std::string> keys{"seed_retries", "probe_factor", "vertex_factor", "cut_threshold",
                                          "piece_cap"};
  if (!j.is_object()) throw std::invalid_argument("tester config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!keys.contains(key)) throw std::invalid_argument("unknown tester key '" + key + "'");
  }
  TesterConfig c;
  c.seed_retries = j.value("seed_retries", c.seed_retries);
  c.probe_factor = j.value("probe_factor", c.probe_factor);
  c.vertex_factor = j.value("vertex_factor", c.vertex_factor);
  c.piece_cap = j.value("piece_cap", c.piece_cap);
  if (j.contains("cut_threshold") && !j["cut_threshold"].is_null()) c.cut_threshold = j["cut_threshold"].get<double>();
  if (c.seed_retries < 1) throw std::invalid_argument("seed_retries must be >= 1");
  if (!(c.probe_factor > 0) || !(c.vertex_factor > 0)) throw std::invalid_argument("sample factors must be positive");
  return c;
}

nlohmann::json TestOutcome::to_json() const {
  nlohmann::json j{{"verdict", accept ? "accept" : "reject"},
                   {"reason", reason},
                   {"seeds_tried", seeds_tried},
                   {"cut_estimate", cut_estimate},
                   {"vertices_checked", vertices_checked}};
  j["oracle_seed"] = oracle_seed ? nlohmann::json(*oracle_seed) : nlohmann::json(nullptr);
  j["witness"] = witness ? nlohmann::json(*witness) : nlohmann::json(nullptr);
  return j;
}

TestOutcome test_property(const Graph& g, double epsilon, const OracleParams& params, std::uint64_t seed,
                          const ComponentDecider& decider, const TesterConfig& cfg) {
  TestOutcome out;
  const std::size_t n = g.num_vertices();
  const double threshold = cfg.threshold(epsilon);
  std::unique_ptr<PartitionOracle> oracle;
  for (std::size_t a = 0; a < cfg.seed_retries; ++a) {
    ++out.seeds_tried;
    auto candidate = std::make_unique<PartitionOracle>(g, params, attempt_seed(seed, a));
    out.cut_estimate = n == 0 ? 0 : estimate_cut_fraction(*candidate, cfg.probes(epsilon), a);
    if (out.cut_estimate <= threshold) {
      out.oracle_seed = candidate->master_seed();
      oracle = std::move(candidate);
      break;
    }
  }
  if (!oracle) {
    out.reason = "cut";
    return out;
  }
  const std::size_t m = n == 0 ? 0 : cfg.vertices(epsilon);
  std::map<Vertex, bool> verdicts;  // keyed by the piece's smallest member
  for (std::size_t i = 0; i < m; ++i) {
    const auto v = static_cast<Vertex>(to_bounded(draw64(seed, Purpose::TesterVertex, i), n));
    ++out.vertices_checked;
    const VertexSet piece = oracle->find_partition(v);
    auto [it, fresh] = verdicts.try_emplace(piece.front(), true);
    if (fresh) it->second = decider(piece_graph(g, piece, cfg.piece_cap));
    if (!it->second) {
      out.reason = "piece";
      out.witness = v;
      return out;
    }
  }
  out.accept = true;
  out.reason = "accepted";
  return out;
}

// ---------------------------------------------------------------------------

nlohmann::json Estimate::to_json() const {
  return {{"estimate", estimate},     {"stderr_proxy", stderr_proxy}, {"samples", samples},
          {"seed", seed},             {"oracle_seed", oracle_seed},   {"cut_estimate", cut_estimate}};
}

Estimate estimate_with_oracle(const PartitionOracle& oracle, const ComponentScorer& scorer, std::size_t samples,
                              std::uint64_t stream, std::size_t piece_cap) {
  if (samples == 0) throw std::invalid_argument("estimate: samples must be >= 1");
  const Graph& g = oracle.graph();
  const std::size_t n = g.num_vertices();
  Estimate e;
  e.samples = samples;
  e.oracle_seed = oracle.master_seed();
  if (n == 0) return e;
  std::map<Vertex, double> per_vertex;  // keyed by the piece's smallest member
  double sum = 0;
  double sum_sq = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto v = static_cast<Vertex>(to_bounded(oracle.seeds().draw(Purpose::EstimatorVertex, stream, i), n));
    const VertexSet piece = oracle.find_partition(v);
    auto [it, fresh] = per_vertex.try_emplace(piece.front(), 0.0);
    if (fresh) it->second = scorer(piece_graph(g, piece, piece_cap)) / static_cast<double>(piece.size());
    sum += it->second;
    sum_sq += it->second * it->second;
  }
  const double k = static_cast<double>(samples);
  const double mean = sum / k;
  const double var = samples > 1 ? std::max(0.0, (sum_sq - k * mean * mean) / (k - 1)) : 0.0;
  e.estimate = static_cast<double>(n) * mean;
  e.stderr_proxy = static_cast<double>(n) * std::sqrt(var / k);
  return e;
}

double score_all_pieces(const PartitionOracle& oracle, const ComponentScorer& scorer, std::size_t piece_cap) {
  const Graph& g = oracle.graph();
  double total = 0;
  std::vector<bool> done(g.num_vertices(), false);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (done[v]) continue;
    const VertexSet piece = oracle.find_partition(v);
    for (Vertex u : piece) done[u] = true;
    total += scorer(piece_graph(g, piece, piece_cap));
  }
  return total;
}

Estimate estimate_additive(const Graph& g, double epsilon, const OracleParams& params, std::uint64_t seed,
                           const ComponentScorer& scorer, std::size_t samples, const TesterConfig& cfg) {
  const double threshold = cfg.threshold(epsilon);
  std::unique_ptr<PartitionOracle> best;
  double best_cut = 0;
  for (std::size_t a = 0; a < cfg.seed_retries; ++a) {
    auto candidate = std::make_unique<PartitionOracle>(g, params, attempt_seed(seed, a));
    const double cut = g.num_vertices() == 0 ? 0 : estimate_cut_fraction(*candidate, cfg.probes(epsilon), a);
    if (!best || cut < best_cut) {
      best = std::move(candidate);
      best_cut = cut;
    }
    if (best_cut <= threshold) break;
  }
  Estimate e = estimate_with_oracle(*best, scorer, samples, 0, cfg.piece_cap);
  e.seed = seed;
  e.cut_estimate = best_cut;
  return e;
}

// ---------------------------------------------------------------------------

namespace {

const std::map<std::string, ComponentDecider>& deciders() {
  static const std::map<std::string, ComponentDecider> m{
      {"bipartite", [](const Graph& g) { return is_bipartite(g); }},
      {"triangle-free", [](const Graph& g) { return is_triangle_free(g); }},
  };
  return m;
}

const std::map<std::string, ComponentScorer>& scorers() {
  static const std::map<std::string, ComponentScorer> m{
      {"matching", [](const Graph& g) { return static_cast<double>(max_matching(g)); }},
      {"vertex-cover", [](const Graph& g) { return static_cast<double>(min_vertex_cover(g)); }},
      {"independent-set", [](const Graph& g) { return static_cast<double>(max_independent_set(g)); }},
      {"dominating-set", [](const Graph& g) { return static_cast<double>(min_dominating_set(g)); }},
  };
  return m;
}

template <class Map>
std::string known(const Map& m) {
  std::string s;
  for (const auto& [name, fn] : m) s += (s.empty() ? "" : ", ") + name;
  return s;
}

}  // namespace

ComponentDecider decider_by_name(const std::string& name) {
  auto it = deciders().find(name);
  if (it == deciders().end()) throw RegistryError("unknown property '" + name + "' (known: " + known(deciders()) + ")");
  return it->second;
}

ComponentScorer scorer_by_name(const std::string& name) {
  auto it = scorers().find(name);
  if (it == scorers().end()) throw RegistryError("unknown scorer '" + name + "' (known: " + known(scorers()) + ")");
  return it->second;
}

std::vector<std::string> decider_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : deciders()) out.push_back(name);
  return out;
}

std::vector<std::string> scorer_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : scorers()) out.push_back(name);
  return out;
}

}  // namespace po
