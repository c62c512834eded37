#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "po/analysis.hpp"
#include "po/applications.hpp"
#include "po/config.hpp"
#include "po/oracle.hpp"

using namespace po;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitReject = 3;

struct CommonFlags {
  std::string config;
  std::string graph;
  std::uint64_t seed = 0;
  double eps = 0;
  std::string mode;
  std::vector<std::string> sets;
  std::string out;
  std::size_t samples = 0;
  bool force = false;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* eps_opt = nullptr;
  CLI::Option* samples_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "RunConfig JSON file");
    app->add_option("--graph", graph, "edge-list graph file");
    seed_opt = app->add_option("--seed", seed, "master seed");
    eps_opt = app->add_option("--eps", eps, "proximity parameter");
    app->add_option("--mode", mode, "parameter mode")->check(CLI::IsMember({"paper", "explicit"}));
    app->add_option("--set", sets, "parameter override key=val (repeatable)");
    app->add_option("--out", out, "output path (default stdout)");
    samples_opt = app->add_option("--samples", samples, "sample count");
    app->add_flag("--force", force, "lift the desk-scale census cap");
  }

  RunConfig resolve() const {
    RunConfig c = config.empty() ? RunConfig{} : RunConfig::load(config);
    if (!graph.empty()) c.graph = graph;
    if (seed_opt->count() > 0) c.seed = seed;
    if (eps_opt->count() > 0) c.epsilon = eps;
    if (!mode.empty()) c.mode = parse_mode(mode);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw ParamError("--set expects key=val, got '" + kv + "'");
      c.overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (!out.empty()) c.out = out;
    if (samples_opt->count() > 0) c.samples = samples;
    if (force) c.force = true;
    if (c.graph.empty()) throw std::invalid_argument("no graph given (--graph or config \"graph\")");
    return c;
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

nlohmann::json envelope(const std::string& command, const RunConfig& cfg) {
  const auto cj = cfg.to_json();
  return {{"command", command}, {"config", cj}, {"config_hash", config_hash(cj)}};
}

void emit_json(const RunConfig& cfg, const nlohmann::json& j) { emit(cfg.out, j.dump(2) + "\n"); }

nlohmann::json thresholds_json(const PhaseThresholds& k) { return k.k; }

// ---------------------------------------------------------------------------

int cmd_gen(const std::string& kind, const std::vector<std::uint64_t>& dims, const std::string& out) {
  auto need = [&](std::size_t count) {
    if (dims.size() != count) {
      throw std::invalid_argument("gen " + kind + " expects " + std::to_string(count) + " dimension arguments");
    }
  };
  Graph g;
  if (kind == "grid") {
    need(2);
    g = gen_grid(dims[0], dims[1]);
  } else if (kind == "tri-grid") {
    need(2);
    g = gen_triangulated_grid(dims[0], dims[1]);
  } else if (kind == "tree") {
    need(3);
    g = gen_random_tree(dims[0], static_cast<std::uint32_t>(dims[1]), dims[2]);
  } else if (kind == "cycle") {
    need(1);
    g = gen_cycle(dims[0]);
  } else if (kind == "path") {
    need(1);
    g = gen_path(dims[0]);
  } else if (kind == "bridge") {
    need(1);
    g = gen_bridged_cycles(dims[0]);
  } else {
    throw std::invalid_argument("unknown generator '" + kind + "' (grid, tri-grid, tree, cycle, path, bridge)");
  }
  if (out.empty()) {
    std::cout << format_graph(g);
  } else {
    save_graph(g, out);
  }
  return kExitOk;
}

int cmd_partition(const RunConfig& cfg) {
  const Graph g = load_graph(cfg.graph);
  const OracleParams params = params_for(cfg, g, cfg.epsilon);
  PartitionOracle oracle(g, params, cfg.seed);
  const Partition local = cfg.global && !cfg.verify ? Partition{} : oracle.local_partition(thread_count_from_env());
  const Partition global = cfg.global || cfg.verify ? oracle.global_partition() : Partition{};
  const Partition& chosen = cfg.global ? global : local;

  auto j = envelope("partition", cfg);
  j["path"] = cfg.global ? "global" : "local";
  j["thresholds"] = thresholds_json(oracle.thresholds());
  j["partition"] = partition_to_json(g, Partition{chosen.anchor, {}}, cfg.seed, params);
  j["report"] = measure_cut(g, chosen, cfg.epsilon).to_json();
  if (cfg.verify) {
    const bool same = local.anchor == global.anchor;
    j["verified"] = same;
    emit_json(cfg, j);
    if (!same) {
      std::cerr << "error: local and global partitions differ\n";
      return kExitError;
    }
    return kExitOk;
  }
  emit_json(cfg, j);
  return kExitOk;
}

int cmd_query(const RunConfig& cfg, std::uint64_t v) {
  const Graph g = load_graph(cfg.graph);
  if (v >= g.num_vertices()) {
    throw std::out_of_range("vertex " + std::to_string(v) + " out of range (n = " + std::to_string(g.num_vertices()) +
                            ")");
  }
  PartitionOracle oracle(g, params_for(cfg, g, cfg.epsilon), cfg.seed);
  const auto t0 = std::chrono::steady_clock::now();
  const VertexSet piece = oracle.find_partition(static_cast<Vertex>(v));
  const auto t1 = std::chrono::steady_clock::now();
  auto j = envelope("query", cfg);
  j["vertex"] = v;
  j["anchor"] = oracle.find_anchor(static_cast<Vertex>(v));
  j["piece"] = piece;
  emit_json(cfg, j);
  std::cerr << "query time: " << std::chrono::duration<double>(t1 - t0).count() << " s (includes findr)\n";
  return kExitOk;
}

int cmd_test(const RunConfig& cfg, const std::string& property) {
  const ComponentDecider decider = decider_by_name(property);
  const Graph g = load_graph(cfg.graph);
  // The oracle runs at proximity eps / 8.
  const OracleParams params = params_for(cfg, g, cfg.epsilon / 8);
  const TestOutcome r = test_property(g, cfg.epsilon, params, cfg.seed, decider, cfg.tester);
  auto j = envelope("test", cfg);
  j["property"] = property;
  j["result"] = r.to_json();
  emit_json(cfg, j);
  return r.accept ? kExitOk : kExitReject;
}

int cmd_estimate(const RunConfig& cfg, const std::string& name) {
  const ComponentScorer scorer = scorer_by_name(name);
  const Graph g = load_graph(cfg.graph);
  const OracleParams params = params_for(cfg, g, cfg.epsilon);
  const Estimate e = estimate_additive(g, cfg.epsilon, params, cfg.seed, scorer, cfg.samples, cfg.tester);
  auto j = envelope("estimate", cfg);
  j["scorer"] = name;
  j["result"] = e.to_json();
  emit_json(cfg, j);
  return kExitOk;
}

VertexSet parse_free(const std::string& spec, const PartitionOracle& oracle) {
  const std::size_t n = oracle.graph().num_vertices();
  if (spec == "all") {
    VertexSet f(n);
    for (Vertex v = 0; v < n; ++v) f[v] = v;
    return f;
  }
  if (spec == "none") return {};
  if (spec.rfind("phase:", 0) == 0) {
    const auto h = std::stoull(spec.substr(6));
    return free_set(oracle.global_partition(), h);
  }
  throw std::invalid_argument("--free expects all, none or phase:H");
}

int cmd_census(const RunConfig& cfg, const std::string& kind, std::size_t h, const std::string& seeds_spec,
               const std::string& free_spec, const std::vector<Vertex>& sources) {
  const Graph g = load_graph(cfg.graph);
  if (g.num_vertices() > cfg.census_max_n && !cfg.force) {
    throw std::invalid_argument("census on n = " + std::to_string(g.num_vertices()) + " exceeds the desk-scale cap of " +
                                std::to_string(cfg.census_max_n) + "; pass --force to run anyway");
  }
  PartitionOracle oracle(g, params_for(cfg, g, cfg.epsilon), cfg.seed);
  std::ostringstream csv;
  if (kind == "viability") {
    const auto& fr = oracle.findr_result();
    if (h < 1 || h > oracle.params().h_bar) throw std::invalid_argument("--phase must lie in [1, h_bar]");
    const VertexSet free = free_set(oracle.global_partition(), h);
    std::vector<Vertex> seeds;
    if (seeds_spec == "trace") {
      seeds = fr.phases[h - 1].seeds;
    } else if (seeds_spec == "all") {
      seeds = seeds_at_least(oracle, h);
    } else {
      throw std::invalid_argument("--seeds expects trace or all");
    }
    write_viability_csv(csv, viability_census(oracle, h, free, oracle.params().k_candidates, seeds));
  } else if (kind == "leaky") {
    const VertexSet free = parse_free(free_spec, oracle);
    std::vector<LeakyRow> rows;
    std::vector<Vertex> src = sources;
    if (src.empty()) {
      for (Vertex v = 0; v < g.num_vertices(); ++v) src.push_back(v);
    }
    for (Vertex s : src) {
      if (s >= g.num_vertices()) throw std::out_of_range("source " + std::to_string(s) + " out of range");
      auto r = leaky_census(oracle, s, free);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    write_leaky_csv(csv, rows);
  } else if (kind == "good-seeds") {
    const VertexSet free = parse_free(free_spec, oracle);
    const auto c = good_seed_census(oracle, free);
    const double need = oracle.params().beta * static_cast<double>(oracle.params().ell) / 8.0;
    csv << "s,timesteps,good\n";
    for (auto [s, steps] : c.timesteps) csv << s << ',' << steps << ',' << (steps >= need ? 1 : 0) << '\n';
  } else {
    throw std::invalid_argument("unknown census '" + kind + "' (viability, leaky, good-seeds)");
  }
  emit(cfg.out, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local partition oracle for bounded-degree graphs"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "write a generated graph");
  std::string gen_kind;
  std::vector<std::uint64_t> gen_dims;
  std::string gen_out;
  gen->add_option("kind", gen_kind, "grid | tri-grid | tree | cycle | path | bridge")->required();
  gen->add_option("dims", gen_dims, "dimensions (tree: n d seed)")->required();
  gen->add_option("--out", gen_out, "output file (default stdout)");

  CommonFlags part_flags;
  auto* part = app.add_subcommand("partition", "partition every vertex");
  part_flags.attach(part);
  bool global = false;
  bool verify = false;
  part->add_flag("--global", global, "use the reference global run");
  part->add_flag("--verify", verify, "run both paths and fail if they differ");

  CommonFlags query_flags;
  auto* query = app.add_subcommand("query", "piece containing one vertex");
  query_flags.attach(query);
  std::uint64_t query_v = 0;
  query->add_option("vertex", query_v, "query vertex")->required();

  CommonFlags test_flags;
  auto* test = app.add_subcommand("test", "property tester");
  test_flags.attach(test);
  std::string property;
  test->add_option("property", property, "bipartite | triangle-free")->required();

  CommonFlags est_flags;
  auto* est = app.add_subcommand("estimate", "additive estimator");
  est_flags.attach(est);
  std::string scorer;
  est->add_option("scorer", scorer, "matching | vertex-cover | independent-set | dominating-set")->required();

  CommonFlags census_flags;
  auto* census = app.add_subcommand("census", "exhaustive census as CSV");
  census_flags.attach(census);
  std::string census_kind;
  std::size_t census_h = 1;
  std::string census_seeds = "trace";
  std::string census_free = "all";
  std::vector<Vertex> census_sources;
  census->add_option("kind", census_kind, "viability | leaky | good-seeds")->required();
  census->add_option("--phase", census_h, "phase h for the viability census");
  census->add_option("--seeds", census_seeds, "viability seeds: trace (findr's sample) or all");
  census->add_option("--free", census_free, "free set: all, none or phase:H");
  census->add_option("--source", census_sources, "leaky census sources (default all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) return cmd_gen(gen_kind, gen_dims, gen_out);
    if (*part) {
      RunConfig cfg = part_flags.resolve();
      if (global) cfg.global = true;
      if (verify) cfg.verify = true;
      return cmd_partition(cfg);
    }
    if (*query) return cmd_query(query_flags.resolve(), query_v);
    if (*test) return cmd_test(test_flags.resolve(), property);
    if (*est) return cmd_estimate(est_flags.resolve(), scorer);
    if (*census) return cmd_census(census_flags.resolve(), census_kind, census_h, census_seeds, census_free,
                                   census_sources);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
