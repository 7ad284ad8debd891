#pragma once

#include <cstdint>

namespace cgraph {

// splitmix64: the project-wide pseudo-random generator. It is tiny, fast,
// and bit-stable across platforms and standard libraries, which matters
// because generated graphs and randomized structures must reproduce exactly
// from a seed everywhere. (std::uniform_int_distribution makes no such
// cross-implementation promise.)
struct SplitMix64 {
  std::uint64_t state = 0;

  SplitMix64() = default;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform draw in [0, bound) via multiply-shift reduction. bound must be
  // nonzero.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Lemire's multiply-shift reduction of an already-random 64-bit value onto
// [0, bound).
inline std::uint64_t reduce64(std::uint64_t x, std::uint64_t bound) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * bound) >> 64);
}

// Stateless one-shot mix of a 64-bit value (the splitmix64 finalizer).
// Used for hash-slot choice, label signatures, and union-find priorities.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-thread generator stream. Streams are seeded from a process-wide base
// seed plus a per-thread counter, so a single-threaded run draws an
// identical sequence on every execution with the same base seed.
SplitMix64& thread_rng();

// Resets the base seed and the calling thread's stream. Other threads keep
// their current streams until they next call reseed themselves.
void reseed_rng(std::uint64_t base_seed);

}  // namespace cgraph
