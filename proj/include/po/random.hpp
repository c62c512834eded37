#pragma once

#include <cstdint>

namespace po {

/// Tags that separate independent random streams derived from one master seed.
enum class Purpose : std::uint64_t {
  Phase = 1,
  WalkLength = 2,
  FindrSample = 3,
  CutProbeVertex = 4,
  CutProbeSlot = 5,
  TesterVertex = 6,
  EstimatorVertex = 7,
  Reseed = 8,
  TreeAttach = 9,
  Census = 10,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based draw: a pure function of (seed, purpose, a, b). Gives O(1)
/// random access to any value of any stream, identical on every platform.
constexpr std::uint64_t draw64(std::uint64_t seed, Purpose purpose, std::uint64_t a,
                               std::uint64_t b = 0) {
  std::uint64_t x = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(purpose)));
  x = splitmix64(x ^ a);
  return splitmix64(x ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

/// Uniform in [0, 1) with 53 bits.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform in [0, n) by multiply-shift. Bias is below 2^-64 * n.
constexpr std::uint64_t to_bounded(std::uint64_t bits, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(bits) * n) >> 64);
}

}  // namespace po
