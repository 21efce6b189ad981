#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ltad::rng {

// Stateless counter-based generator: every draw is a pure function of the
// key it is derived from, so streams keyed by (seed, replication, row,
// column) reproduce exactly regardless of evaluation order or thread count.

inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t key(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                         std::uint64_t d = 0, std::uint64_t e = 0) {
  std::uint64_t k = mix(a);
  k = mix(k ^ b);
  k = mix(k ^ c);
  k = mix(k ^ d);
  k = mix(k ^ e);
  return k;
}

// Uniform draw in the open interval (0, 1).
inline double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform(std::uint64_t k) { return to_unit(mix(k)); }

// Standard normal via Box-Muller on two salted sub-streams of the key.
inline double normal(std::uint64_t k) {
  const double u1 = to_unit(mix(k ^ 0x243f6a8885a308d3ull));
  const double u2 = to_unit(mix(k ^ 0x13198a2e03707344ull));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Uniform integer in [0, bound) by fixed-point multiplication.
inline std::uint64_t bounded(std::uint64_t k, std::uint64_t bound) {
  const unsigned __int128 prod =
      static_cast<unsigned __int128>(mix(k)) * static_cast<unsigned __int128>(bound);
  return static_cast<std::uint64_t>(prod >> 64);
}

}  // namespace ltad::rng
