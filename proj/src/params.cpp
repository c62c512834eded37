#include "po/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace po {

namespace {

constexpr std::uint64_t kDefaultSampleCap = 4000;

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ParamError("bad numeric value for '" + key + "': '" + value + "'");
  }
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    if (!value.empty() && value.front() == '-') throw std::invalid_argument(value);
    auto x = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ParamError("bad integer value for '" + key + "': '" + value + "'");
  }
}

std::size_t saturate(double x) {
  if (!(x < 1e18)) return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(std::ceil(x));
}

std::vector<std::size_t> powers_of_two(std::size_t max_k) {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k <= max_k; k *= 2) out.push_back(k);
  return out;
}

std::vector<std::size_t> full_range(std::size_t max_k) {
  std::vector<std::size_t> out(max_k);
  for (std::size_t k = 0; k < max_k; ++k) out[k] = k + 1;
  return out;
}

void derive_counts(OracleParams& p, std::optional<std::uint64_t> gate, std::optional<std::uint64_t> keep) {
  p.gate_count = gate.value_or(static_cast<std::uint64_t>(std::llround(p.beta * static_cast<double>(p.sample_count))));
  p.keep_count = keep.value_or(std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::ceil(p.beta * p.beta * static_cast<double>(p.sample_count) - 1e-9))));
}

}  // namespace

PaperMagnitudes paper_magnitudes(double epsilon, std::uint32_t d) {
  const double le = std::log10(epsilon);
  const double ld = std::log10(static_cast<double>(d));
  PaperMagnitudes m;
  m.log10_ell = 6 * ld - 30 * le;
  m.log10_rho = -60 * ld + 3000 * le;
  m.log10_phi = -ld + 10 * le;
  m.log10_beta = le - 1;
  m.log10_delta = -70 * ld + 3100 * le;
  m.log10_alpha = (4.0 / 3.0) * le - std::log10(300000.0);
  // h_bar = 2 delta^-1 ln(delta^-1)
  m.log10_h_bar = std::log10(2.0) - m.log10_delta + std::log10(-m.log10_delta * std::log(10.0));
  m.log10_sample_count = -10 * m.log10_beta;
  m.log10_gate_count = -9 * m.log10_beta;
  m.log10_keep_count = -8 * m.log10_beta;
  return m;
}

std::size_t OracleParams::max_k() const {
  if (!(rho > 0)) return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(std::floor(1.0 / rho + 1e-9));
}

bool OracleParams::executable() const {
  return rho > 0 && rho < 1 && ell >= 1 && ell <= 100000 && h_bar >= 1 && h_bar <= 100000 && delta > 0 &&
         !k_candidates.empty() && sample_count <= 100000000ULL;
}

std::string to_string(ParamMode m) { return m == ParamMode::Paper ? "paper" : "explicit"; }

ParamMode parse_mode(const std::string& s) {
  if (s == "paper") return ParamMode::Paper;
  if (s == "explicit") return ParamMode::Explicit;
  throw ParamError("unknown mode '" + s + "' (expected paper|explicit)");
}

std::string to_string(Arithmetic a) { return a == Arithmetic::Exact ? "exact" : "double"; }

Arithmetic parse_arithmetic(const std::string& s) {
  if (s == "exact") return Arithmetic::Exact;
  if (s == "double") return Arithmetic::Double;
  throw ParamError("unknown arithmetic '" + s + "' (expected exact|double)");
}

std::vector<std::size_t> parse_k_candidates(const std::string& spec, std::size_t max_k) {
  if (spec == "pow2") return powers_of_two(max_k);
  if (spec == "full") return full_range(max_k);
  std::vector<std::size_t> out;
  if (auto dots = spec.find(".."); dots != std::string::npos) {
    const auto lo = parse_count("k_candidates", spec.substr(0, dots));
    const auto hi = parse_count("k_candidates", spec.substr(dots + 2));
    if (lo < 1 || hi < lo) throw ParamError("bad k_candidates range '" + spec + "'");
    for (auto k = lo; k <= hi; ++k) out.push_back(k);
  } else {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_count("k_candidates", item));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (!out.empty() && out.front() < 1) throw ParamError("k candidates must be >= 1");
  if (!out.empty() && out.back() > max_k) {
    throw ParamError("k candidate " + std::to_string(out.back()) + " exceeds floor(1/rho) = " + std::to_string(max_k));
  }
  return out;
}

void validate(const OracleParams& p) {
  if (!(p.epsilon > 0 && p.epsilon < 1)) throw ParamError("epsilon must lie in (0, 1)");
  if (p.d < 1) throw ParamError("d must be positive");
  if (p.mode == ParamMode::Paper) {
    if (!p.paper) throw ParamError("paper mode requires formula magnitudes");
    if (p.paper->log10_rho >= 0) throw ParamError("rho must be below 1");
    if (p.paper->log10_delta > 0) throw ParamError("delta must be at most 1");
    return;
  }
  if (p.ell < 1) throw ParamError("ell must be >= 1");
  if (!(p.rho > 0 && p.rho < 1)) throw ParamError("rho must lie in (0, 1)");
  if (!(p.phi > 0)) throw ParamError("phi must be positive");
  if (!(p.beta > 0 && p.beta <= 1)) throw ParamError("beta must lie in (0, 1]");
  if (!(p.delta > 0 && p.delta <= 1)) throw ParamError("delta must lie in (0, 1]");
  if (!(p.alpha > 0)) throw ParamError("alpha must be positive");
  if (p.h_bar < 1) throw ParamError("h_bar must be >= 1");
  if (p.k_candidates.empty()) throw ParamError("k_candidates must not be empty");
  const std::size_t cap = p.max_k();
  for (std::size_t k : p.k_candidates) {
    if (k < 1) throw ParamError("k candidates must be >= 1");
    if (k > cap) {
      throw ParamError("k candidate " + std::to_string(k) + " exceeds floor(1/rho) = " + std::to_string(cap));
    }
  }
  if (!std::is_sorted(p.k_candidates.begin(), p.k_candidates.end())) throw ParamError("k_candidates must be ascending");
  if (p.sample_count < 1) throw ParamError("sample_count must be >= 1");
  if (p.keep_count < 1) throw ParamError("keep_count must be >= 1");
  if (p.arithmetic == Arithmetic::Exact && p.ell > max_exact_steps(p.d)) {
    throw ParamError("exact arithmetic supports ell <= " + std::to_string(max_exact_steps(p.d)) + " at d = " +
                     std::to_string(p.d));
  }
}

OracleParams derive_params(double epsilon, std::uint32_t d, ParamMode mode, const ParamOverrides& overrides) {
  if (!(epsilon > 0 && epsilon < 1)) throw ParamError("epsilon must lie in (0, 1)");
  if (d < 2) throw ParamError("d must be >= 2");

  OracleParams p;
  p.mode = mode;
  p.epsilon = epsilon;
  p.d = d;
  p.beta = epsilon / 10;
  p.alpha = std::pow(epsilon, 4.0 / 3.0) / 300000.0;

  if (mode == ParamMode::Paper) {
    const auto m = paper_magnitudes(epsilon, d);
    p.paper = m;
    p.ell = saturate(std::pow(10.0, m.log10_ell));
    p.rho = std::pow(10.0, m.log10_rho);
    p.phi = std::pow(10.0, m.log10_phi);
    p.beta = std::pow(10.0, m.log10_beta);
    p.delta = std::pow(10.0, m.log10_delta);
    p.alpha = std::pow(10.0, m.log10_alpha);
    p.h_bar = saturate(std::pow(10.0, m.log10_h_bar));
    p.sample_count = saturate(std::pow(10.0, m.log10_sample_count));
    p.gate_count = saturate(std::pow(10.0, m.log10_gate_count));
    p.keep_count = saturate(std::pow(10.0, m.log10_keep_count));
    if (auto it = overrides.find("arithmetic"); it != overrides.end()) p.arithmetic = parse_arithmetic(it->second);
    validate(p);
    return p;
  }

  std::optional<std::string> k_spec;
  std::optional<std::uint64_t> sample, gate, keep;
  for (const auto& [key, value] : overrides) {
    if (key == "ell") {
      p.ell = parse_count(key, value);
    } else if (key == "rho") {
      p.rho = parse_double(key, value);
    } else if (key == "phi") {
      p.phi = parse_double(key, value);
    } else if (key == "beta") {
      p.beta = parse_double(key, value);
    } else if (key == "delta") {
      p.delta = parse_double(key, value);
    } else if (key == "alpha") {
      p.alpha = parse_double(key, value);
    } else if (key == "h_bar") {
      p.h_bar = parse_count(key, value);
    } else if (key == "k_candidates") {
      k_spec = value;
    } else if (key == "sample_count") {
      sample = parse_count(key, value);
    } else if (key == "gate_count") {
      gate = parse_count(key, value);
    } else if (key == "keep_count") {
      keep = parse_count(key, value);
    } else if (key == "arithmetic") {
      p.arithmetic = parse_arithmetic(value);
    } else {
      throw ParamError("unknown parameter '" + key + "'");
    }
  }
  if (!(p.rho > 0 && p.rho < 1)) throw ParamError("rho must lie in (0, 1)");
  if (!(p.beta > 0 && p.beta <= 1)) throw ParamError("beta must lie in (0, 1]");
  p.k_candidates = parse_k_candidates(k_spec.value_or("pow2"), p.max_k());
  const double paper_samples = std::pow(p.beta, -10.0);
  p.sample_count = sample.value_or(paper_samples < static_cast<double>(kDefaultSampleCap)
                                       ? static_cast<std::uint64_t>(std::ceil(paper_samples - 1e-9))
                                       : kDefaultSampleCap);
  derive_counts(p, gate, keep);
  validate(p);
  return p;
}

nlohmann::json OracleParams::to_json() const {
  nlohmann::json j;
  j["mode"] = to_string(mode);
  j["epsilon"] = epsilon;
  j["d"] = d;
  j["ell"] = ell;
  j["rho"] = rho;
  j["phi"] = phi;
  j["beta"] = beta;
  j["delta"] = delta;
  j["alpha"] = alpha;
  j["h_bar"] = h_bar;
  j["k_candidates"] = k_candidates;
  j["sample_count"] = sample_count;
  j["gate_count"] = gate_count;
  j["keep_count"] = keep_count;
  j["arithmetic"] = to_string(arithmetic);
  if (paper) {
    j["paper_log10"] = {{"ell", paper->log10_ell},     {"rho", paper->log10_rho},
                        {"phi", paper->log10_phi},     {"beta", paper->log10_beta},
                        {"delta", paper->log10_delta}, {"alpha", paper->log10_alpha},
                        {"h_bar", paper->log10_h_bar}};
  }
  return j;
}

OracleParams OracleParams::from_json(const nlohmann::json& j) {
  const auto mode = parse_mode(j.value("mode", std::string("explicit")));
  const double eps = j.value("epsilon", 0.1);
  const auto d = j.value("d", 4U);
  if (mode == ParamMode::Paper) {
    ParamOverrides o;
    if (j.contains("arithmetic")) o["arithmetic"] = j["arithmetic"].get<std::string>();
    return derive_params(eps, d, mode, o);
  }
  OracleParams p;
  p.mode = mode;
  p.epsilon = eps;
  p.d = d;
  p.ell = j.at("ell").get<std::size_t>();
  p.rho = j.at("rho").get<double>();
  p.phi = j.at("phi").get<double>();
  p.beta = j.at("beta").get<double>();
  p.delta = j.at("delta").get<double>();
  p.alpha = j.at("alpha").get<double>();
  p.h_bar = j.at("h_bar").get<std::size_t>();
  p.k_candidates = j.at("k_candidates").get<std::vector<std::size_t>>();
  p.sample_count = j.at("sample_count").get<std::uint64_t>();
  p.gate_count = j.at("gate_count").get<std::uint64_t>();
  p.keep_count = j.at("keep_count").get<std::uint64_t>();
  p.arithmetic = parse_arithmetic(j.value("arithmetic", std::string("double")));
  validate(p);
  return p;
}

// ---------------------------------------------------------------------------

std::size_t geometric_phase(double u, double delta, std::size_t h_bar) {
  if (delta >= 1.0) return 1;
  if (!(u < 1.0)) return h_bar;
  // Smallest x >= 1 with 1 - (1 - delta)^x > u.
  const double x = std::floor(std::log1p(-u) / std::log1p(-delta));
  if (!(x < static_cast<double>(h_bar))) return h_bar;
  return std::min<std::size_t>(h_bar, 1 + static_cast<std::size_t>(x));
}

std::size_t SeedContext::phase_of(Vertex v) const {
  return geometric_phase(to_unit(draw(Purpose::Phase, v)), params_->delta, params_->h_bar);
}

std::size_t SeedContext::walk_len_of(Vertex v) const {
  return 1 + static_cast<std::size_t>(to_bounded(draw(Purpose::WalkLength, v), params_->ell));
}

bool SeedContext::precedes(Vertex u, Vertex v) const {
  if (u == v) throw std::invalid_argument("precedes: u and v must differ");
  const auto hu = phase_of(u);
  const auto hv = phase_of(v);
  return hu != hv ? hu < hv : u < v;
}

}  // namespace po
