#pragma once

#include <cmath>
#include <cstdint>

namespace roadlpp {

// Counter-based randomness: every draw is a pure function of (seed, counter
// words). Fields built on top of this are region-independent and can be
// sampled in any order, on any number of threads, with identical results.

/// splitmix64 finalizer; full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

/// Hash of (seed, x, y, stream). A vertex's draw depends on exactly these
/// four words, never on the bounds of the region it was sampled through.
constexpr std::uint64_t vertex_hash(std::uint64_t seed, std::int64_t x, std::int64_t y,
                                    std::uint64_t stream = 0) noexcept {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL));
  h = mix64(h ^ (static_cast<std::uint64_t>(y) + 0x6a09e667f3bcc909ULL));
  h = mix64(h ^ (stream + 0xbb67ae8584caa73bULL));
  return h;
}

/// Map a hash to the open interval (0,1). Uses (k + 1/2) / 2^53 on the top
/// 53 bits, so the result is never exactly 0 or 1.
constexpr double uniform_open01(std::uint64_t h) noexcept {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

/// Exp(1) draw via inverse CDF; strictly positive because u < 1.
inline double exp1_from_hash(std::uint64_t h) noexcept { return -std::log(uniform_open01(h)); }

/// Deterministic per-trial seed stream derived from a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    std::uint64_t stream) noexcept {
  return mix64(mix64(master ^ mix64(index + 0x9e3779b97f4a7c15ULL)) ^
               mix64(stream + 0x2545f4914f6cdd1dULL));
}

}  // namespace roadlpp
