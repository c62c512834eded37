#pragma once

#include <algorithm>
#include <boost/multiprecision/gmp.hpp>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "po/graph.hpp"

namespace po {

using Rational = boost::multiprecision::mpq_rational;

/// Relative slack for "<= rho" truncation in double arithmetic.
inline constexpr double kDoubleTruncationSlack = 1e-12;

/// Sparse non-negative vertex-indexed vector. Entries are kept sorted by id and
/// every stored mass is strictly positive.
template <class Mass>
class MassVector {
 public:
  using Entry = std::pair<Vertex, Mass>;

  MassVector() = default;
  /// Entries may come in any order; zero entries are dropped, duplicates summed.
  explicit MassVector(std::vector<Entry> entries) : entries_(std::move(entries)) { normalize(); }

  static MassVector unit(Vertex v) { return MassVector(std::vector<Entry>{{v, Mass(1)}}); }

  static MassVector uniform(std::size_t n) {
    std::vector<Entry> e;
    e.reserve(n);
    for (std::size_t v = 0; v < n; ++v) e.emplace_back(static_cast<Vertex>(v), Mass(1) / Mass(static_cast<long>(n)));
    return MassVector(std::move(e));
  }

  std::span<const Entry> entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  Mass at(Vertex v) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const Entry& e, Vertex x) { return e.first < x; });
    return (it != entries_.end() && it->first == v) ? it->second : Mass(0);
  }

  bool in_support(Vertex v) const { return at(v) > Mass(0); }

  Mass total() const {
    Mass s(0);
    for (const auto& e : entries_) s += e.second;
    return s;
  }

  VertexSet support() const {
    VertexSet s;
    s.reserve(entries_.size());
    for (const auto& e : entries_) s.push_back(e.first);
    return s;
  }

  friend bool operator==(const MassVector&, const MassVector&) = default;

 private:
  void normalize() {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::vector<Entry> merged;
    merged.reserve(entries_.size());
    for (auto& e : entries_) {
      if (e.second < Mass(0)) throw std::invalid_argument("MassVector: negative mass");
      if (!merged.empty() && merged.back().first == e.first) {
        merged.back().second += e.second;
      } else {
        merged.push_back(std::move(e));
      }
    }
    std::erase_if(merged, [](const Entry& e) { return !(e.second > Mass(0)); });
    entries_ = std::move(merged);
  }

  std::vector<Entry> entries_;
};

namespace detail {

// Applies the walk matrix with a fixed accumulation order: for every target w
// (ascending), self term first, then neighbours in ascending id. `finish`
// turns the accumulated numerator into the stored value.
template <class Mass, class Finish>
std::vector<std::pair<Vertex, Mass>> walk_numerators(const Graph& g,
                                                     std::span<const std::pair<Vertex, Mass>> p,
                                                     Finish finish) {
  std::vector<Vertex> targets;
  targets.reserve(p.size() * (g.degree_bound() + 1));
  for (const auto& [v, m] : p) {
    targets.push_back(v);
    for (Vertex w : g.neighbors(v)) targets.push_back(w);
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  auto lookup = [&](Vertex v) -> const Mass* {
    auto it = std::lower_bound(p.begin(), p.end(), v,
                               [](const std::pair<Vertex, Mass>& e, Vertex x) { return e.first < x; });
    return (it != p.end() && it->first == v) ? &it->second : nullptr;
  };

  const auto two_d = static_cast<long>(2 * g.degree_bound());
  std::vector<std::pair<Vertex, Mass>> out;
  out.reserve(targets.size());
  for (Vertex w : targets) {
    Mass acc(0);
    if (const Mass* self = lookup(w)) acc = *self * Mass(two_d - static_cast<long>(g.degree(w)));
    for (Vertex u : g.neighbors(w)) {
      if (const Mass* m = lookup(u)) acc += *m;
    }
    if (acc > Mass(0)) out.emplace_back(w, finish(std::move(acc), two_d));
  }
  return out;
}

inline bool truncated_away(double m, double rho) { return m <= rho * (1.0 + kDoubleTruncationSlack); }
inline bool truncated_away(const Rational& m, const Rational& rho) { return m <= rho; }

}  // namespace detail

/// One step of the lazy walk M: M[u][v] = 1/2d on edges, M[v][v] = 1 - deg(v)/2d.
template <class Mass>
MassVector<Mass> lazy_step(const Graph& g, const MassVector<Mass>& p) {
  auto out = detail::walk_numerators<Mass>(g, p.entries(),
                                           [](Mass acc, long two_d) { return acc / Mass(two_d); });
  return MassVector<Mass>(std::move(out));
}

/// Zeroes every coordinate whose value is at most rho. In double arithmetic the
/// comparison is against rho * (1 + 1e-12).
template <class Mass>
MassVector<Mass> truncate(const MassVector<Mass>& p, const Mass& rho) {
  std::vector<std::pair<Vertex, Mass>> kept;
  for (const auto& e : p.entries()) {
    if (!detail::truncated_away(e.second, rho)) kept.push_back(e);
  }
  return MassVector<Mass>(std::move(kept));
}

/// t-step truncated diffusion from the unit vector at v; truncation after every step.
template <class Mass>
MassVector<Mass> truncated_diffusion(const Graph& g, Vertex v, std::size_t t, const Mass& rho) {
  auto p = MassVector<Mass>::unit(v);
  for (std::size_t i = 0; i < t; ++i) p = truncate(lazy_step(g, p), rho);
  return p;
}

/// Plain t-step diffusion M^t e_v.
template <class Mass>
MassVector<Mass> diffusion(const Graph& g, Vertex v, std::size_t t) {
  auto p = MassVector<Mass>::unit(v);
  for (std::size_t i = 0; i < t; ++i) p = lazy_step(g, p);
  return p;
}

/// Supported vertices ordered by mass descending, ties by id ascending.
template <class Mass>
std::vector<Vertex> ranking(const MassVector<Mass>& p) {
  std::vector<std::size_t> idx(p.support_size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto e = p.entries();
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (e[a].second != e[b].second) return e[a].second > e[b].second;
    return e[a].first < e[b].first;
  });
  std::vector<Vertex> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(e[i].first);
  return out;
}

/// The k heaviest vertices of p (ties by id). Unsupported vertices rank below
/// all supported ones, by id, so the result is defined for every k <= n.
VertexSet level_set_from_ranking(std::span<const Vertex> ranked, std::size_t k, std::size_t n);

template <class Mass>
VertexSet level_set(const MassVector<Mass>& p, std::size_t k, std::size_t n) {
  return level_set_from_ranking(ranking(p), k, n);
}

/// Phi(S) = E(S, V\S) / (2 min(|S|, |V\S|) d), kept as an exact fraction.
struct Conductance {
  std::size_t cut = 0;
  std::size_t denominator = 1;

  double value() const { return static_cast<double>(cut) / static_cast<double>(denominator); }
  bool at_most(double phi) const { return static_cast<double>(cut) <= phi * static_cast<double>(denominator); }
  bool below(double phi) const { return static_cast<double>(cut) < phi * static_cast<double>(denominator); }
};

/// Throws std::invalid_argument when S is empty or S = V.
Conductance conductance(const Graph& g, std::span<const Vertex> s);
Conductance conductance_from_cut(const Graph& g, std::size_t cut, std::size_t size);

/// Lovasz-Simonovits curve x -> I(p, x): sum of the x heaviest masses at integer
/// x, linear in between, flat after the support ends.
class LSCurve {
 public:
  LSCurve() = default;
  LSCurve(std::vector<double> masses, std::size_t n);

  template <class Mass>
  static LSCurve of(const MassVector<Mass>& p, std::size_t n) {
    std::vector<double> m;
    m.reserve(p.support_size());
    for (const auto& e : p.entries()) m.push_back(static_cast<double>(e.second));
    return LSCurve(std::move(m), n);
  }

  double operator()(double x) const;
  std::size_t n() const { return n_; }
  /// I at x = 0..support_size.
  std::span<const double> breakpoints() const { return prefix_; }
  bool is_concave(double tol = 1e-15) const;

 private:
  std::vector<double> prefix_{0.0};
  std::size_t n_ = 0;
};

struct ChordCheck {
  double lhs = 0;  ///< I(Mp, x)
  double rhs = 0;  ///< (I(p, x - 2 xbar Phi) + I(p, x + 2 xbar Phi)) / 2
};

/// Evaluates both sides of the Lovasz-Simonovits step inequality at integer x,
/// with S_x the x-vertex level set of Mp. Requires 1 <= x <= n-1.
ChordCheck ls_check_chord(const Graph& g, const MassVector<double>& p, std::size_t x);

// ---------------------------------------------------------------------------
// Trajectories consumed by the oracle.

enum class Arithmetic { Double, Exact };

/// The support of one truncated-diffusion step, reduced to what clustering needs.
struct DiffusionStep {
  std::vector<Vertex> ranked;   ///< mass descending, ties by id
  std::vector<Vertex> members;  ///< ascending id
  std::vector<double> mass;     ///< mass[i] belongs to ranked[i]

  bool contains(Vertex v) const { return po::contains(members, v); }
};

/// Steps 0..steps of the truncated diffusion from v. Exact arithmetic keeps
/// integer numerators over the common denominator (2d)^t and compares against
/// the exact binary value of rho; it throws std::overflow_error when (2d)^steps
/// does not fit in 126 bits.
std::vector<DiffusionStep> truncated_trajectory(const Graph& g, Vertex v, std::size_t steps, double rho,
                                                Arithmetic arithmetic);

/// Largest step count the exact engine supports for degree bound d.
std::size_t max_exact_steps(std::uint32_t d);

}  // namespace po
