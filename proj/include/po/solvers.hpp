#pragma once

#include <cstddef>
#include <stdexcept>

#include "po/graph.hpp"

namespace po {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vertex limit of the exponential solvers (one bit per vertex).
inline constexpr std::size_t kMaxBranchVertices = 64;

/// Maximum matching size (Edmonds' blossom algorithm). Polynomial, no size limit.
std::size_t max_matching(const Graph& g);

/// Maximum independent set by branch and bound with memoisation. n <= 64.
std::size_t max_independent_set(const Graph& g);

/// Minimum vertex cover, n - MIS. n <= 64.
std::size_t min_vertex_cover(const Graph& g);

/// Minimum dominating set by branching on the closed neighbourhood of an
/// undominated vertex. n <= 64.
std::size_t min_dominating_set(const Graph& g);

/// Whether g contains h as a (not necessarily induced) subgraph. |V(h)| <= 5.
bool contains_subgraph(const Graph& g, const Graph& h);

bool is_triangle_free(const Graph& g);

}  // namespace po
