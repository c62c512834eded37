#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "po/config.hpp"

using namespace po;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PO_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Run r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("po_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

const std::string kBridgeSets = "--set ell=20 --set rho=0.001 --set phi=0.15 --set k_candidates=1..8";

}  // namespace

TEST_CASE("config: JSON round trip and strict keys") {
  RunConfig c;
  c.graph = "g.txt";
  c.seed = 9;
  c.overrides = {{"ell", "12"}};
  c.tester.cut_threshold = 0.4;
  const RunConfig back = RunConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK_THROWS_AS(RunConfig::from_json({{"grpah", "x"}}), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::array()), std::invalid_argument);
  // Numeric override values are accepted and kept as text.
  const RunConfig n = RunConfig::from_json({{"overrides", {{"ell", 7}}}});
  CHECK(n.overrides.at("ell") == "7");
  CHECK_THROWS(RunConfig::load("/nonexistent/config.json"));
}

TEST_CASE("config: hash") {
  CHECK(config_hash(nlohmann::json::object()) == config_hash(nlohmann::json::object()));
  CHECK(config_hash({{"a", 1}}) != config_hash({{"a", 2}}));
  CHECK(config_hash({{"a", 1}}).size() == 16);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : std::string(R"({"a":1})")) h = (h ^ ch) * 1099511628211ULL;
  char want[17];
  std::snprintf(want, sizeof want, "%016llx", static_cast<unsigned long long>(h));
  CHECK(config_hash({{"a", 1}}) == want);
}

TEST_CASE("config: shipped calibration loads") {
  const RunConfig c = RunConfig::load(fs::path(PO_SOURCE_DIR) / "config/calibrated.json");
  CHECK(c.mode == ParamMode::Explicit);
  CHECK(c.tester.cut_threshold.has_value());
  CHECK(c.calibration.contains("grid50_cut_fraction"));
  const Graph g = gen_grid(50, 50);
  CHECK_NOTHROW(params_for(c, g, c.epsilon));
}

TEST_CASE("cli gen") {
  TempDir tmp;
  CHECK(run("gen grid 2 2 --out " + (tmp / "g.txt")).code == 0);
  CHECK(load_graph(tmp / "g.txt").num_vertices() == 4);
  CHECK(run("gen tri-grid 3 3 --out " + (tmp / "t.txt")).code == 0);
  CHECK(load_graph(tmp / "t.txt").num_vertices() == 9);
  CHECK(load_graph(tmp / "t.txt") == gen_triangulated_grid(3, 3));
  const Run a = run("gen tree 100 3 7");
  const Run b = run("gen tree 100 3 7");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(parse_graph(a.out) == gen_random_tree(100, 3, 7));
  CHECK(run("gen tree 100 3 8").out != a.out);
  CHECK(run("gen grid 2").code == 1);
  CHECK(run("gen hypercube 3").code == 1);
}

TEST_CASE("cli partition: local, global and golden") {
  TempDir tmp;
  const std::string graph = tmp / "b.txt";
  REQUIRE(run("gen bridge 4 --out " + graph).code == 0);
  const Run local = run("partition --graph " + graph + " --seed 42 " + kBridgeSets);
  const Run global = run("partition --global --graph " + graph + " --seed 42 " + kBridgeSets);
  REQUIRE(local.code == 0);
  REQUIRE(global.code == 0);
  const auto jl = nlohmann::json::parse(local.out);
  const auto jg = nlohmann::json::parse(global.out);
  CHECK(jl.at("partition") == jg.at("partition"));
  CHECK(jl.at("partition").dump() == jg.at("partition").dump());
  CHECK(jl.at("report") == jg.at("report"));
  CHECK(jl.at("thresholds") == jg.at("thresholds"));
  CHECK(jl.at("path") == "local");
  CHECK(jg.at("path") == "global");
  CHECK(jl.at("config_hash") == config_hash(jl.at("config")));

  const auto golden = nlohmann::json::parse(slurp(fs::path(PO_SOURCE_DIR) / "tests/data/bridge4_seed42.json"));
  CHECK(jl.at("partition") == golden);

  const Run verified = run("partition --verify --graph " + graph + " --seed 42 " + kBridgeSets);
  CHECK(verified.code == 0);
  CHECK(nlohmann::json::parse(verified.out).at("verified") == true);
}

TEST_CASE("cli partition: errors") {
  CHECK(run("partition --graph /nonexistent/graph.txt").code == 1);
  TempDir tmp;
  std::ofstream(tmp / "empty.txt").close();
  CHECK(run("partition --graph " + (tmp / "empty.txt")).code == 1);
  CHECK(run("partition").code == 1);
  REQUIRE(run("gen grid 3 3 --out " + (tmp / "g.txt")).code == 0);
  CHECK(run("partition --graph " + (tmp / "g.txt") + " --set nope=1").code == 1);
  CHECK(run("partition --graph " + (tmp / "g.txt") + " --set k_candidates=2000").code == 1);
  CHECK(run("partition --graph " + (tmp / "g.txt") + " --mode paper").code == 1);
}

TEST_CASE("cli partition: config file and --out") {
  TempDir tmp;
  const std::string graph = tmp / "g.txt";
  REQUIRE(run("gen grid 6 6 --out " + graph).code == 0);
  RunConfig c;
  c.graph = graph;
  c.seed = 3;
  c.overrides = {{"k_candidates", "1..20"}};
  std::ofstream(tmp / "c.json") << c.to_json().dump();
  const Run a = run("partition --config " + (tmp / "c.json"));
  REQUIRE(a.code == 0);
  CHECK(run("partition --config " + (tmp / "c.json") + " --out " + (tmp / "p.json")).code == 0);
  const auto ja = nlohmann::json::parse(a.out);
  const auto jb = nlohmann::json::parse(slurp(tmp / "p.json"));
  CHECK(ja.at("partition") == jb.at("partition"));
  CHECK(ja.at("config").at("seed") == 3);
  std::ofstream(tmp / "bad.json") << R"({"graph": "x", "sed": 1})";
  CHECK(run("partition --config " + (tmp / "bad.json")).code == 1);
}

TEST_CASE("cli query") {
  TempDir tmp;
  const std::string graph = tmp / "b.txt";
  REQUIRE(run("gen bridge 4 --out " + graph).code == 0);
  const Run a = run("query 2 --graph " + graph + " --seed 42 " + kBridgeSets);
  const Run b = run("query 2 --graph " + graph + " --seed 42 " + kBridgeSets);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j.at("piece") == std::vector<Vertex>{0, 1, 2, 3, 4});
  CHECK(j.at("anchor") == 1);
  CHECK(run("query 1000000 --graph " + graph).code == 1);

  // A graph whose pieces are whole components.
  std::ofstream(tmp / "tri.txt") << "6 2\n0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n";
  const Run whole = run("query 4 --graph " + (tmp / "tri.txt") +
                        " --set ell=10 --set rho=0.01 --set beta=0.1 --set k_candidates=2,3");
  REQUIRE(whole.code == 0);
  CHECK(nlohmann::json::parse(whole.out).at("piece") == std::vector<Vertex>{3, 4, 5});
}

TEST_CASE("cli test and estimate") {
  TempDir tmp;
  REQUIRE(run("gen grid 10 10 --out " + (tmp / "g.txt")).code == 0);
  REQUIRE(run("gen tri-grid 10 10 --out " + (tmp / "t.txt")).code == 0);
  const std::string cfg = std::string(PO_SOURCE_DIR) + "/config/calibrated.json";
  const Run accept = run("test bipartite --config " + cfg + " --graph " + (tmp / "g.txt"));
  CHECK(accept.code == 0);
  CHECK(nlohmann::json::parse(accept.out).at("result").at("verdict") == "accept");
  const Run reject = run("test bipartite --config " + cfg + " --graph " + (tmp / "t.txt"));
  CHECK(reject.code == 3);
  CHECK(nlohmann::json::parse(reject.out).at("result").at("verdict") == "reject");
  CHECK(run("test chromatic --graph " + (tmp / "g.txt")).code == 1);

  REQUIRE(run("gen path 2000 --out " + (tmp / "p.txt")).code == 0);
  const Run est = run("estimate matching --config " + cfg + " --graph " + (tmp / "p.txt"));
  REQUIRE(est.code == 0);
  const auto je = nlohmann::json::parse(est.out).at("result");
  CHECK(std::abs(je.at("estimate").get<double>() - 1000) <= 200);
  for (const char* key : {"estimate", "stderr_proxy", "samples", "seed"}) CHECK(je.contains(key));
  CHECK(run("estimate maxcut --graph " + (tmp / "p.txt")).code == 1);
}

TEST_CASE("cli census") {
  TempDir tmp;
  const std::string graph = tmp / "b.txt";
  REQUIRE(run("gen bridge 4 --out " + graph).code == 0);
  const Run via = run("census viability --phase 1 --graph " + graph + " --seed 42 " + kBridgeSets);
  REQUIRE(via.code == 0);
  CHECK(via.out.rfind("h,k,seeds,viable,quota,chosen\n", 0) == 0);
  // The chosen flag marks findr's k_1 = 5 and nothing else.
  std::istringstream lines(via.out);
  std::string line;
  std::getline(lines, line);
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    const bool is_five = line.rfind("1,5,", 0) == 0;
    CHECK(line.substr(line.rfind(',') + 1) == (is_five ? "1" : "0"));
  }
  CHECK(rows == 8);

  const Run leaky = run("census leaky --free none --source 0 --source 5 --graph " + graph + " --seed 42 " + kBridgeSets);
  REQUIRE(leaky.code == 0);
  std::istringstream ll(leaky.out);
  std::getline(ll, line);
  CHECK(line == "s,t,leaking,certificate_k,conductance");
  rows = 0;
  while (std::getline(ll, line)) {
    ++rows;
    CHECK(line.find(",1,,") != std::string::npos);
  }
  CHECK(rows == 40);

  CHECK(run("census good-seeds --free all --graph " + graph).code == 0);
  CHECK(run("census bogus --graph " + graph).code == 1);

  REQUIRE(run("gen path 6000 --out " + (tmp / "big.txt")).code == 0);
  CHECK(run("census good-seeds --free none --graph " + (tmp / "big.txt")).code == 1);
  CHECK(run("census good-seeds --free none --force --graph " + (tmp / "big.txt")).code == 0);
}

TEST_CASE("cli determinism: every command twice") {
  TempDir tmp;
  REQUIRE(run("gen grid 12 12 --out " + (tmp / "g.txt")).code == 0);
  const std::string cfg = std::string(PO_SOURCE_DIR) + "/config/calibrated.json --graph " + (tmp / "g.txt");
  for (const std::string& args :
       {"partition --config " + cfg, "partition --global --config " + cfg, "query 17 --config " + cfg,
        "test bipartite --config " + cfg, "estimate vertex-cover --config " + cfg,
        "census viability --phase 1 --config " + cfg, "census leaky --free phase:2 --source 3 --config " + cfg}) {
    INFO(args);
    const Run a = run(args);
    const Run b = run(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}
