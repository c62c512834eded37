#include "doctest.h"
#include "po/analysis.hpp"
#include "po/applications.hpp"
#include "po/solvers.hpp"
#include "reference.hpp"

using namespace po;

namespace {

OracleParams closed_gate(std::uint32_t d) {
  return derive_params(0.1, d, ParamMode::Explicit, {{"sample_count", "10"}, {"gate_count", "1000"}, {"k_candidates", "1..8"}});
}

Graph two_triangles() {
  const std::vector<std::pair<Vertex, Vertex>> e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
  return Graph::from_edges(6, 2, e);
}

OracleParams triangle_params() {
  return derive_params(0.1, 2, ParamMode::Explicit,
                       {{"ell", "10"}, {"rho", "0.01"}, {"phi", "0.2"}, {"beta", "0.1"}, {"k_candidates", "2,3"}});
}

}  // namespace

TEST_CASE("estimate_cut_fraction: zero when no edge is cut") {
  const Graph g = two_triangles();
  PartitionOracle o(g, triangle_params(), 1);
  REQUIRE(o.global_partition().cut_edges(g) == 0);
  CHECK(o.global_partition().pieces(g) == std::vector<VertexSet>{{0, 1, 2}, {3, 4, 5}});
  CHECK(estimate_cut_fraction(o, 1000) == 0.0);

  const Graph one = gen_grid(1, 1);
  PartitionOracle lone(one, ref::corpus_params(one), 1);
  CHECK(estimate_cut_fraction(lone, 100) == 0.0);
}

TEST_CASE("estimate_cut_fraction: all singletons of a regular graph") {
  const Graph c = gen_cycle(30);
  PartitionOracle o(c, closed_gate(2), 1);
  for (std::size_t k : o.thresholds().k) REQUIRE(k == 0);
  CHECK(estimate_cut_fraction(o, 500) == 1.0);
  CHECK(estimate_cut_fraction(o, 500, 3) == 1.0);
  CHECK_THROWS_AS(estimate_cut_fraction(o, 0), std::invalid_argument);
}

TEST_CASE("estimate_cut_fraction: 50x50 grid against the exact count") {
  const Graph g = gen_grid(50, 50);
  const OracleParams p = derive_params(0.1, 4, ParamMode::Explicit,
                                       {{"ell", "20"}, {"rho", "0.001"}, {"h_bar", "10"}, {"k_candidates", "1..31"},
                                        {"beta", "0.1"}, {"phi", "0.1"}, {"delta", "0.1"}});
  PartitionOracle o(g, p, 1);
  const CutReport r = measure_cut(g, o.global_partition(), 0.1);
  const double est = estimate_cut_fraction(o, 10000);
  MESSAGE("probe estimate " << est << ", exact cut_fraction " << r.cut_fraction);
  // A probe hits with probability 2 cut / (d n).
  CHECK(std::abs(est - 2 * r.cut_fraction) <= 0.05);
  // Same draws, same answer.
  CHECK(est == estimate_cut_fraction(o, 10000));
}

TEST_CASE("TesterConfig") {
  TesterConfig c;
  CHECK(c.seed_retries == 8);
  CHECK(c.probes(0.1) == 480);
  CHECK(c.vertices(0.1) == 80);
  CHECK(c.threshold(0.1) == doctest::Approx(0.025));
  c.cut_threshold = 0.5;
  CHECK(c.threshold(0.1) == 0.5);
  const TesterConfig back = TesterConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK_THROWS(TesterConfig::from_json({{"bogus", 1}}));
}

TEST_CASE("test_property: always-true decider") {
  const ComponentDecider yes = [](const Graph&) { return true; };
  TesterConfig cfg;
  cfg.cut_threshold = 0.6;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Graph g = gen_grid(20, 20);
    const auto out = test_property(g, 0.1, ref::corpus_params(g), seed, yes, cfg);
    CHECK(out.reason != "piece");
    if (out.oracle_seed) CHECK(out.accept);
    if (out.accept) CHECK(out.vertices_checked == cfg.vertices(0.1));
  }
  // No seed can pass phase 1 when every edge is cut and the threshold is tight.
  const Graph c = gen_cycle(40);
  TesterConfig tight;
  tight.cut_threshold = 0.5;
  const auto out = test_property(c, 0.1, closed_gate(2), 1, yes, tight);
  CHECK_FALSE(out.accept);
  CHECK(out.reason == "cut");
  CHECK(out.seeds_tried == tight.seed_retries);
}

TEST_CASE("test_property: a failing piece rejects with a witness") {
  const Graph g = two_triangles();
  TesterConfig cfg;
  cfg.cut_threshold = 0.5;
  const auto out = test_property(g, 0.1, triangle_params(), 1, decider_by_name("bipartite"), cfg);
  CHECK_FALSE(out.accept);
  CHECK(out.reason == "piece");
  REQUIRE(out.witness.has_value());
  CHECK(*out.witness < 6);
  CHECK(out.to_json().at("reason") == "piece");
  CHECK(test_property(g, 0.1, triangle_params(), 1, [](const Graph&) { return true; }, cfg).accept);
}

TEST_CASE("estimate: telescoping identity") {
  const ComponentScorer size = [](const Graph& h) { return static_cast<double>(h.num_vertices()); };
  for (const auto& e : ref::corpus()) {
    PartitionOracle o(e.g, ref::corpus_params(e.g), e.seed);
    const auto est = estimate_with_oracle(o, size, 300, 1);
    CHECK(est.estimate == doctest::Approx(static_cast<double>(e.g.num_vertices())));
    CHECK(est.stderr_proxy == doctest::Approx(0.0));
    CHECK(score_all_pieces(o, size) == static_cast<double>(e.g.num_vertices()));
  }
}

TEST_CASE("estimate: full enumeration equals the sum over pieces") {
  const auto matching = scorer_by_name("matching");
  for (const auto& e : ref::corpus()) {
    const Graph& g = e.g;
    PartitionOracle o(g, ref::corpus_params(g), e.seed);
    double per_vertex = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      const VertexSet piece = o.find_partition(v);
      per_vertex += static_cast<double>(max_matching(induced_subgraph(g, piece))) / static_cast<double>(piece.size());
    }
    double per_piece = 0;
    for (const auto& piece : o.global_partition().pieces(g)) {
      per_piece += static_cast<double>(max_matching(induced_subgraph(g, piece)));
    }
    CHECK(per_vertex == doctest::Approx(per_piece));
    CHECK(score_all_pieces(o, matching) == doctest::Approx(per_piece));
  }
}

TEST_CASE("estimate: sampled mean formula") {
  const Graph g = gen_grid(12, 12);
  PartitionOracle o(g, ref::corpus_params(g), 4);
  const auto scorer = scorer_by_name("independent-set");
  const auto est = estimate_with_oracle(o, scorer, 200, 9);
  double sum = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    const auto v = static_cast<Vertex>(to_bounded(o.seeds().draw(Purpose::EstimatorVertex, 9, i), g.num_vertices()));
    const VertexSet piece = o.find_partition(v);
    sum += static_cast<double>(max_independent_set(induced_subgraph(g, piece))) / static_cast<double>(piece.size());
  }
  CHECK(est.estimate == doctest::Approx(static_cast<double>(g.num_vertices()) * sum / 200));
  CHECK(est.samples == 200);
  CHECK(est.oracle_seed == 4);
  const auto j = est.to_json();
  for (const char* key : {"estimate", "stderr_proxy", "samples", "seed"}) CHECK(j.contains(key));
}

TEST_CASE("estimate_additive: path matching") {
  const Graph path = gen_path(2000);
  const OracleParams p = derive_params(0.1, 2, ParamMode::Explicit,
                                       {{"ell", "20"}, {"rho", "0.001"}, {"h_bar", "10"}, {"k_candidates", "1..31"},
                                        {"beta", "0.1"}, {"phi", "0.1"}, {"delta", "0.1"}});
  TesterConfig cfg;
  cfg.cut_threshold = 0.5;
  const auto est = estimate_additive(path, 0.1, p, 1, scorer_by_name("matching"), 1000, cfg);
  MESSAGE("P2000 matching estimate " << est.estimate);
  CHECK(std::abs(est.estimate - 1000) <= 200);
  CHECK(est.seed == 1);
}

TEST_CASE("registry") {
  CHECK(decider_names() == std::vector<std::string>{"bipartite", "triangle-free"});
  CHECK(scorer_names() == std::vector<std::string>{"dominating-set", "independent-set", "matching", "vertex-cover"});
  CHECK_THROWS_AS(decider_by_name("chromatic"), RegistryError);
  CHECK_THROWS_AS(scorer_by_name("maxcut"), RegistryError);
  CHECK(decider_by_name("bipartite")(gen_cycle(4)));
  CHECK_FALSE(decider_by_name("bipartite")(gen_cycle(5)));
  CHECK_FALSE(decider_by_name("triangle-free")(gen_cycle(3)));
  CHECK(scorer_by_name("vertex-cover")(gen_path(3)) == 1.0);
  CHECK(scorer_by_name("dominating-set")(gen_path(3)) == 1.0);
}

TEST_CASE("piece cap is enforced") {
  const Graph g = gen_path(100);
  const OracleParams p = derive_params(0.1, 2, ParamMode::Explicit, {{"k_candidates", "1..64"}, {"beta", "0.1"}});
  PartitionOracle o(g, p, 1);
  std::size_t largest = 0;
  for (const auto& piece : o.global_partition().pieces(g)) largest = std::max(largest, piece.size());
  REQUIRE(largest > 2);
  CHECK_THROWS_AS(score_all_pieces(o, scorer_by_name("matching"), 2), SolverError);
  CHECK_NOTHROW(score_all_pieces(o, scorer_by_name("matching"), largest));
}
