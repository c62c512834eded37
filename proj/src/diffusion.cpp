#include "po/diffusion.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace po {

VertexSet level_set_from_ranking(std::span<const Vertex> ranked, std::size_t k, std::size_t n) {
  if (k > n) throw std::invalid_argument("level_set: k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
  VertexSet out(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranked.size())));
  if (k > ranked.size()) {
    VertexSet supported(ranked.begin(), ranked.end());
    std::sort(supported.begin(), supported.end());
    for (Vertex v = 0; out.size() < k; ++v) {
      if (!contains(supported, v)) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Conductance conductance_from_cut(const Graph& g, std::size_t cut, std::size_t size) {
  const std::size_t n = g.num_vertices();
  if (size == 0 || size >= n) throw std::invalid_argument("conductance undefined for empty set or S = V");
  const std::size_t small = std::min(size, n - size);
  return {cut, 2 * small * g.degree_bound()};
}

Conductance conductance(const Graph& g, std::span<const Vertex> s) {
  return conductance_from_cut(g, boundary_edges(g, s), s.size());
}

// ---------------------------------------------------------------------------

LSCurve::LSCurve(std::vector<double> masses, std::size_t n) : n_(n) {
  std::sort(masses.begin(), masses.end(), std::greater<>{});
  if (masses.size() > n) throw std::invalid_argument("LSCurve: support larger than n");
  prefix_.assign(1, 0.0);
  prefix_.reserve(masses.size() + 1);
  for (double m : masses) prefix_.push_back(prefix_.back() + m);
}

double LSCurve::operator()(double x) const {
  if (x <= 0) return 0.0;
  const double last = static_cast<double>(prefix_.size() - 1);
  if (x >= last) return prefix_.back();
  const auto lo = static_cast<std::size_t>(std::floor(x));
  const double frac = x - static_cast<double>(lo);
  return prefix_[lo] + frac * (prefix_[lo + 1] - prefix_[lo]);
}

bool LSCurve::is_concave(double tol) const {
  // Slopes are the sorted masses followed by zeros.
  double prev = INFINITY;
  for (std::size_t i = 1; i < prefix_.size(); ++i) {
    const double slope = prefix_[i] - prefix_[i - 1];
    if (slope > prev + tol || slope < -tol) return false;
    prev = slope;
  }
  return true;
}

ChordCheck ls_check_chord(const Graph& g, const MassVector<double>& p, std::size_t x) {
  const std::size_t n = g.num_vertices();
  if (x < 1 || x + 1 > n) throw std::invalid_argument("ls_check_chord: need 1 <= x <= n-1");
  const auto mp = lazy_step(g, p);
  const auto s_x = level_set(mp, x, n);
  const double phi = conductance(g, s_x).value();
  const double xbar = static_cast<double>(std::min(x, n - x));
  const double spread = 2.0 * xbar * phi;
  const auto before = LSCurve::of(p, n);
  const double xd = static_cast<double>(x);
  return {LSCurve::of(mp, n)(xd), 0.5 * (before(xd - spread) + before(xd + spread))};
}

// ---------------------------------------------------------------------------

namespace {

using u128 = unsigned __int128;
using boost::multiprecision::cpp_int;

// floor(rho * denom) where rho is taken at its exact binary value.
u128 exact_threshold(double rho, u128 denom) {
  int exp = 0;
  const double frac = std::frexp(rho, &exp);  // rho = frac * 2^exp, frac in [0.5, 1)
  const auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  const int shift = exp - 53;
  cpp_int d = 0;
  d = static_cast<std::uint64_t>(denom >> 64);
  d <<= 64;
  d += static_cast<std::uint64_t>(denom);
  cpp_int prod = d * mant;
  if (shift >= 0) {
    prod <<= shift;
  } else {
    prod >>= -shift;
  }
  const cpp_int hi = prod >> 64;
  const cpp_int lo = prod & cpp_int(std::numeric_limits<std::uint64_t>::max());
  if (hi > cpp_int(std::numeric_limits<std::uint64_t>::max())) return ~u128(0);
  return (u128(static_cast<std::uint64_t>(hi)) << 64) | u128(static_cast<std::uint64_t>(lo));
}

template <class Mass>
DiffusionStep make_step(std::span<const std::pair<Vertex, Mass>> entries, std::vector<double> as_double) {
  DiffusionStep s;
  std::vector<std::size_t> idx(entries.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (entries[a].second != entries[b].second) return entries[a].second > entries[b].second;
    return entries[a].first < entries[b].first;
  });
  s.ranked.reserve(idx.size());
  s.mass.reserve(idx.size());
  s.members.reserve(idx.size());
  for (auto i : idx) {
    s.ranked.push_back(entries[i].first);
    s.mass.push_back(as_double[i]);
  }
  for (const auto& e : entries) s.members.push_back(e.first);
  return s;
}

std::vector<DiffusionStep> exact_trajectory(const Graph& g, Vertex v, std::size_t steps, double rho) {
  if (steps > max_exact_steps(g.degree_bound())) {
    throw std::overflow_error("exact arithmetic supports at most " + std::to_string(max_exact_steps(g.degree_bound())) +
                              " steps for d = " + std::to_string(g.degree_bound()));
  }
  const u128 two_d = 2 * static_cast<u128>(g.degree_bound());
  std::vector<DiffusionStep> out;
  out.reserve(steps + 1);
  std::vector<std::pair<Vertex, u128>> cur{{v, u128(1)}};
  u128 denom = 1;
  out.push_back(make_step<u128>(cur, {1.0}));
  for (std::size_t t = 1; t <= steps; ++t) {
    auto next = detail::walk_numerators<u128>(g, cur, [](u128 acc, long) { return acc; });
    denom *= two_d;
    const u128 threshold = exact_threshold(rho, denom);
    std::erase_if(next, [&](const auto& e) { return e.second <= threshold; });
    std::vector<double> md;
    md.reserve(next.size());
    const long double dd = static_cast<long double>(denom);
    for (const auto& e : next) md.push_back(static_cast<double>(static_cast<long double>(e.second) / dd));
    out.push_back(make_step<u128>(next, std::move(md)));
    cur = std::move(next);
  }
  return out;
}

std::vector<DiffusionStep> double_trajectory(const Graph& g, Vertex v, std::size_t steps, double rho) {
  std::vector<DiffusionStep> out;
  out.reserve(steps + 1);
  auto p = MassVector<double>::unit(v);
  auto push = [&](const MassVector<double>& q) {
    std::vector<double> md;
    for (const auto& e : q.entries()) md.push_back(e.second);
    out.push_back(make_step<double>(q.entries(), std::move(md)));
  };
  push(p);
  for (std::size_t t = 1; t <= steps; ++t) {
    p = truncate(lazy_step(g, p), rho);
    push(p);
  }
  return out;
}

}  // namespace

std::size_t max_exact_steps(std::uint32_t d) {
  // (2d)^t < 2^126 leaves room for the (2d) factor applied while accumulating.
  const double bits = std::log2(2.0 * d);
  return static_cast<std::size_t>(std::floor(125.0 / bits));
}

std::vector<DiffusionStep> truncated_trajectory(const Graph& g, Vertex v, std::size_t steps, double rho,
                                                Arithmetic arithmetic) {
  if (!(rho > 0 && rho < 1)) throw std::invalid_argument("rho must lie in (0, 1)");
  if (v >= g.num_vertices()) throw std::out_of_range("vertex out of range");
  return arithmetic == Arithmetic::Exact ? exact_trajectory(g, v, steps, rho) : double_trajectory(g, v, steps, rho);
}

}  // namespace po
