#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace po {

using Vertex = std::uint32_t;

/// Sorted list of distinct vertex ids.
using VertexSet = std::vector<Vertex>;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable undirected graph with a degree cap.
///
/// Vertices are the dense ids 0..n-1. Every neighbor list is sorted ascending,
/// adjacency is symmetric, and there are no self-loops or parallel edges. These
/// invariants are checked once at construction; afterwards the object is
/// read-only and can be shared between threads.
class Graph {
 public:
  Graph() = default;

  /// Builds and validates a graph from an edge list. Edge endpoints may be given
  /// in either order. Throws GraphError naming the first offending edge.
  static Graph from_edges(std::size_t n, std::uint32_t d,
                          std::span<const std::pair<Vertex, Vertex>> edges);

  std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return neighbors_.size() / 2; }
  std::uint32_t degree_bound() const { return d_; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::uint32_t degree(Vertex v) const {
    return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
  }
  bool has_edge(Vertex u, Vertex v) const;

  /// Edges (u, v) with u < v in lexicographic order.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::uint32_t d_ = 1;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> neighbors_;
};

/// Reads the edge-list format: header "n d", then one "u v" per line; '#' starts
/// a comment line. Errors carry the 1-based line number.
Graph load_graph(const std::filesystem::path& path);
Graph parse_graph(const std::string& text);

void save_graph(const Graph& g, const std::filesystem::path& path);
std::string format_graph(const Graph& g);

// Generators. All of them produce validated graphs.

/// rows x cols grid, d = 4. Vertex id is r * cols + c.
Graph gen_grid(std::size_t rows, std::size_t cols);

/// Grid plus the (r,c)-(r+1,c+1) diagonal of every unit cell, d = 6.
Graph gen_triangulated_grid(std::size_t rows, std::size_t cols);

/// Uniform-attachment tree: vertex i joins a uniformly chosen earlier vertex
/// whose degree is still below d. Deterministic in seed.
Graph gen_random_tree(std::size_t n, std::uint32_t d, std::uint64_t seed);

/// Simple cycle on n >= 3 vertices, d = 2.
Graph gen_cycle(std::size_t n);

/// Path on n >= 1 vertices, d = 2.
Graph gen_path(std::size_t n);

/// Two `cycle_len`-cycles joined by one bridge between vertex 0 and vertex
/// cycle_len, d = 3.
Graph gen_bridged_cycles(std::size_t cycle_len);

// Small helpers shared by the analysis and application layers.

bool is_sorted_set(std::span<const Vertex> s);
bool contains(std::span<const Vertex> sorted, Vertex v);

/// Number of edges with exactly one endpoint in `s` (sorted).
std::size_t boundary_edges(const Graph& g, std::span<const Vertex> s);

/// Connected components of the subgraph induced by `s` (sorted), each sorted,
/// ordered by smallest member.
std::vector<VertexSet> induced_components(const Graph& g, std::span<const Vertex> s);

/// Subgraph induced by `s` relabelled to 0..|s|-1 in the order of `s`.
Graph induced_subgraph(const Graph& g, std::span<const Vertex> s);

/// Two-colouring check.
bool is_bipartite(const Graph& g);

}  // namespace po
