#include "po/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include "po/random.hpp"

namespace po {

namespace {

std::string edge_str(Vertex u, Vertex v) {
  return "(" + std::to_string(u) + ", " + std::to_string(v) + ")";
}

std::size_t checked_product(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<Vertex>::max() / a) {
    throw GraphError("vertex count overflow: " + std::to_string(a) + " x " + std::to_string(b));
  }
  return a * b;
}

struct LineError {
  std::size_t line;
  std::string what;
};

}  // namespace

Graph Graph::from_edges(std::size_t n, std::uint32_t d,
                        std::span<const std::pair<Vertex, Vertex>> edges) {
  if (d == 0) throw GraphError("degree bound must be positive");
  if (n > std::numeric_limits<Vertex>::max()) throw GraphError("vertex count overflow");

  std::vector<std::size_t> deg(n, 0);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw GraphError("vertex id out of range in edge " + edge_str(u, v));
    if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
    ++deg[u];
    ++deg[v];
  }

  Graph g;
  g.d_ = d;
  g.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + deg[v];
  g.neighbors_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [u, v] : edges) {
    g.neighbors_[fill[u]++] = v;
    g.neighbors_[fill[v]++] = u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto first = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    auto last = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    std::sort(first, last);
    if (auto dup = std::adjacent_find(first, last); dup != last) {
      throw GraphError("duplicate edge " + edge_str(std::min<Vertex>(v, *dup), std::max<Vertex>(v, *dup)));
    }
    if (deg[v] > d) {
      throw GraphError("vertex " + std::to_string(v) + " has degree " + std::to_string(deg[v]) +
                       " > d = " + std::to_string(d));
    }
  }
  return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(num_edges());
  for (Vertex u = 0; u < num_vertices(); ++u) {
    for (Vertex v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Edge-list I/O

namespace {

bool parse_uint(std::string_view tok, std::uint64_t& out) {
  if (tok.empty()) return false;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

// Splits a line into exactly two unsigned integers.
bool parse_pair(std::string_view line, std::uint64_t& a, std::uint64_t& b) {
  auto skip = [&](std::size_t i) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    return i;
  };
  auto token_end = [&](std::size_t i) {
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    return i;
  };
  std::size_t i = skip(0);
  std::size_t j = token_end(i);
  if (!parse_uint(line.substr(i, j - i), a)) return false;
  i = skip(j);
  j = token_end(i);
  if (!parse_uint(line.substr(i, j - i), b)) return false;
  return skip(j) == line.size();
}

}  // namespace

Graph parse_graph(const std::string& text) {
  std::size_t n = 0;
  std::uint32_t d = 0;
  bool have_header = false;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<std::size_t> edge_line;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (line.front() == '#') continue;

    std::uint64_t a = 0, b = 0;
    if (!parse_pair(line, a, b)) {
      throw GraphError("line " + std::to_string(line_no) + ": malformed line '" + std::string(line) + "'");
    }
    if (!have_header) {
      if (b == 0 || b > std::numeric_limits<std::uint32_t>::max() ||
          a > std::numeric_limits<Vertex>::max()) {
        throw GraphError("line " + std::to_string(line_no) + ": invalid header");
      }
      n = a;
      d = static_cast<std::uint32_t>(b);
      have_header = true;
      continue;
    }
    if (a >= n || b >= n) {
      throw GraphError("line " + std::to_string(line_no) + ": vertex id out of range");
    }
    if (a == b) throw GraphError("line " + std::to_string(line_no) + ": self-loop");
    edges.emplace_back(static_cast<Vertex>(std::min(a, b)), static_cast<Vertex>(std::max(a, b)));
    edge_line.push_back(line_no);
  }
  if (!have_header) throw GraphError("missing header line 'n d'");

  // Report the line of the first duplicate or the first edge that overflows a
  // degree, in file order.
  {
    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return edges[x] < edges[y]; });
    std::size_t first_dup = edges.size();
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (edges[order[i]] == edges[order[i - 1]]) first_dup = std::min(first_dup, order[i]);
    }
    if (first_dup != edges.size()) {
      throw GraphError("line " + std::to_string(edge_line[first_dup]) + ": duplicate edge " +
                       edge_str(edges[first_dup].first, edges[first_dup].second));
    }
    std::vector<std::uint32_t> deg(n, 0);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      auto [u, v] = edges[i];
      if (++deg[u] > d || ++deg[v] > d) {
        throw GraphError("line " + std::to_string(edge_line[i]) + ": degree exceeds d = " + std::to_string(d));
      }
    }
  }
  return Graph::from_edges(n, d, edges);
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError("cannot open graph file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

std::string format_graph(const Graph& g) {
  std::string out = std::to_string(g.num_vertices()) + " " + std::to_string(g.degree_bound()) + "\n";
  for (auto [u, v] : g.edges()) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

void save_graph(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw GraphError("cannot write graph file '" + path.string() + "'");
  out << format_graph(g);
  out.flush();
  if (!out) throw GraphError("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Generators

Graph gen_grid(std::size_t rows, std::size_t cols) {
  if (rows < 1 || cols < 1) throw GraphError("grid dimensions must be >= 1");
  const std::size_t n = checked_product(rows, cols);
  std::vector<std::pair<Vertex, Vertex>> edges;
  edges.reserve(rows * (cols - 1) + cols * (rows - 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      auto id = static_cast<Vertex>(r * cols + c);
      if (c + 1 < cols) edges.emplace_back(id, id + 1);
      if (r + 1 < rows) edges.emplace_back(id, static_cast<Vertex>(id + cols));
    }
  }
  return Graph::from_edges(n, 4, edges);
}

Graph gen_triangulated_grid(std::size_t rows, std::size_t cols) {
  if (rows < 2 || cols < 2) throw GraphError("triangulated grid dimensions must be >= 2");
  const std::size_t n = checked_product(rows, cols);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      auto id = static_cast<Vertex>(r * cols + c);
      if (c + 1 < cols) edges.emplace_back(id, id + 1);
      if (r + 1 < rows) edges.emplace_back(id, static_cast<Vertex>(id + cols));
      if (r + 1 < rows && c + 1 < cols) edges.emplace_back(id, static_cast<Vertex>(id + cols + 1));
    }
  }
  return Graph::from_edges(n, 6, edges);
}

Graph gen_random_tree(std::size_t n, std::uint32_t d, std::uint64_t seed) {
  if (n < 1) throw GraphError("tree needs n >= 1");
  if (d < 2) throw GraphError("tree needs d >= 2");
  if (n > std::numeric_limits<Vertex>::max()) throw GraphError("vertex count overflow");
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<std::uint32_t> deg(n, 0);
  // Vertices that can still take a child.
  std::vector<Vertex> open{0};
  std::vector<std::size_t> slot(n, 0);
  for (Vertex i = 1; i < n; ++i) {
    const auto pick = to_bounded(draw64(seed, Purpose::TreeAttach, i), open.size());
    const Vertex parent = open[pick];
    edges.emplace_back(parent, i);
    if (++deg[parent] == d) {
      // swap-remove
      slot[open.back()] = slot[parent];
      open[slot[parent]] = open.back();
      open.pop_back();
    }
    ++deg[i];
    slot[i] = open.size();
    open.push_back(i);
  }
  return Graph::from_edges(n, d, edges);
}

Graph gen_cycle(std::size_t n) {
  if (n < 3) throw GraphError("cycle needs n >= 3");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>((i + 1) % n));
  }
  return Graph::from_edges(n, 2, edges);
}

Graph gen_path(std::size_t n) {
  if (n < 1) throw GraphError("path needs n >= 1");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
  }
  return Graph::from_edges(n, 2, edges);
}

Graph gen_bridged_cycles(std::size_t cycle_len) {
  if (cycle_len < 3) throw GraphError("bridged cycles need cycle length >= 3");
  const std::size_t n = 2 * cycle_len;
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t side = 0; side < 2; ++side) {
    const std::size_t base = side * cycle_len;
    for (std::size_t i = 0; i < cycle_len; ++i) {
      edges.emplace_back(static_cast<Vertex>(base + i), static_cast<Vertex>(base + (i + 1) % cycle_len));
    }
  }
  edges.emplace_back(0, static_cast<Vertex>(cycle_len));
  return Graph::from_edges(n, 3, edges);
}

// ---------------------------------------------------------------------------
// Helpers

bool is_sorted_set(std::span<const Vertex> s) {
  return std::adjacent_find(s.begin(), s.end(), std::greater_equal<>{}) == s.end();
}

bool contains(std::span<const Vertex> sorted, Vertex v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

std::size_t boundary_edges(const Graph& g, std::span<const Vertex> s) {
  std::size_t cut = 0;
  for (Vertex u : s) {
    for (Vertex w : g.neighbors(u)) {
      if (!contains(s, w)) ++cut;
    }
  }
  return cut;
}

std::vector<VertexSet> induced_components(const Graph& g, std::span<const Vertex> s) {
  std::vector<VertexSet> comps;
  std::vector<bool> seen(s.size(), false);
  auto index_of = [&](Vertex v) -> std::ptrdiff_t {
    auto it = std::lower_bound(s.begin(), s.end(), v);
    return (it != s.end() && *it == v) ? it - s.begin() : -1;
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (seen[i]) continue;
    VertexSet comp;
    std::queue<Vertex> q;
    q.push(s[i]);
    seen[i] = true;
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop();
      comp.push_back(u);
      for (Vertex w : g.neighbors(u)) {
        auto j = index_of(w);
        if (j >= 0 && !seen[static_cast<std::size_t>(j)]) {
          seen[static_cast<std::size_t>(j)] = true;
          q.push(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

Graph induced_subgraph(const Graph& g, std::span<const Vertex> s) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (Vertex w : g.neighbors(s[i])) {
      auto it = std::lower_bound(s.begin(), s.end(), w);
      if (it != s.end() && *it == w) {
        auto j = static_cast<Vertex>(it - s.begin());
        if (i < j) edges.emplace_back(static_cast<Vertex>(i), j);
      }
    }
  }
  return Graph::from_edges(s.size(), g.degree_bound(), edges);
}

bool is_bipartite(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<int> colour(n, -1);
  std::queue<Vertex> q;
  for (Vertex s = 0; s < n; ++s) {
    if (colour[s] != -1) continue;
    colour[s] = 0;
    q.push(s);
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop();
      for (Vertex w : g.neighbors(u)) {
        if (colour[w] == -1) {
          colour[w] = 1 - colour[u];
          q.push(w);
        } else if (colour[w] == colour[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace po
