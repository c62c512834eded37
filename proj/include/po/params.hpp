#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "po/diffusion.hpp"
#include "po/graph.hpp"
#include "po/random.hpp"

namespace po {

class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ParamMode { Paper, Explicit };

/// Base-10 logarithms of the asymptotic parameter formulas. Most of these
/// values are far outside double range, so the formulas are carried in the log
/// domain.
struct PaperMagnitudes {
  double log10_ell = 0;
  double log10_rho = 0;
  double log10_phi = 0;
  double log10_beta = 0;
  double log10_delta = 0;
  double log10_alpha = 0;
  double log10_h_bar = 0;
  double log10_sample_count = 0;  // beta^-10
  double log10_gate_count = 0;    // beta^-9
  double log10_keep_count = 0;    // beta^-8
};

PaperMagnitudes paper_magnitudes(double epsilon, std::uint32_t d);

/// Parameter bundle for the oracle.
///
/// In explicit mode every field is a concrete, runnable value. In paper mode the
/// fields hold the formula values where a double can represent them (rho and
/// delta underflow to 0, ell saturates) and `paper` keeps the exact magnitudes;
/// such a bundle validates but is not executable.
struct OracleParams {
  ParamMode mode = ParamMode::Explicit;
  double epsilon = 0.1;
  std::uint32_t d = 4;
  std::size_t ell = 20;
  double rho = 1e-3;
  double phi = 0.2;
  double beta = 0.01;
  double delta = 0.2;
  double alpha = 0;
  std::size_t h_bar = 10;
  /// Ascending candidate size thresholds for findr. Empty in paper mode, where
  /// the candidate set is all of 1..floor(1/rho).
  std::vector<std::size_t> k_candidates;
  std::uint64_t sample_count = 0;
  std::uint64_t gate_count = 0;
  std::uint64_t keep_count = 0;
  Arithmetic arithmetic = Arithmetic::Double;
  std::optional<PaperMagnitudes> paper;

  /// floor(1/rho), the support cap of every truncated vector.
  std::size_t max_k() const;
  bool executable() const;

  nlohmann::json to_json() const;
  static OracleParams from_json(const nlohmann::json& j);
};

/// Key/value overrides as given on the command line (`--set key=val`).
using ParamOverrides = std::map<std::string, std::string>;

/// Paper mode computes every field from (epsilon, d) and ignores overrides other
/// than `arithmetic`. Explicit mode starts from desk-scale defaults and applies
/// the overrides. The result is validated either way.
OracleParams derive_params(double epsilon, std::uint32_t d, ParamMode mode, const ParamOverrides& overrides = {});

/// Throws ParamError on the first violated invariant.
void validate(const OracleParams& p);

/// Parses "1..50", "1,2,4,8", "pow2" or "full" against the cap floor(1/rho).
std::vector<std::size_t> parse_k_candidates(const std::string& spec, std::size_t max_k);

std::string to_string(ParamMode m);
ParamMode parse_mode(const std::string& s);
std::string to_string(Arithmetic a);
Arithmetic parse_arithmetic(const std::string& s);

/// Deterministic per-vertex randomness derived from a master seed.
class SeedContext {
 public:
  SeedContext(std::uint64_t master_seed, const OracleParams& params) : seed_(master_seed), params_(&params) {}

  std::uint64_t master_seed() const { return seed_; }
  const OracleParams& params() const { return *params_; }

  /// h_v = min(X, h_bar), X ~ Geo(delta) on {1, 2, ...}.
  std::size_t phase_of(Vertex v) const;
  /// t_v uniform in [1, ell].
  std::size_t walk_len_of(Vertex v) const;
  /// u comes before v: smaller phase, then smaller id. Throws if u == v.
  bool precedes(Vertex u, Vertex v) const;

  std::uint64_t draw(Purpose p, std::uint64_t a, std::uint64_t b = 0) const { return draw64(seed_, p, a, b); }

 private:
  std::uint64_t seed_;
  const OracleParams* params_;
};

/// Inverse-CDF geometric phase for a uniform draw u in [0, 1).
std::size_t geometric_phase(double u, double delta, std::size_t h_bar);

}  // namespace po
