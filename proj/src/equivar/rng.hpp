#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace equivar {

// 64-bit FNV-1a. Used for content hashes and per-record seed derivation;
// results must be stable across platforms and runs.
inline uint64_t fnv1a64(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t fnv1a64(const std::string& s, uint64_t h = 0xcbf29ce484222325ULL) {
  return fnv1a64(s.data(), s.size(), h);
}

// splitmix64 finalizer; mixes a seed with salt material.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derive an independent stream seed from (seed, salt string, counter).
inline uint64_t deriveSeed(uint64_t seed, const std::string& salt, uint64_t counter = 0) {
  return mix64(seed ^ fnv1a64(salt) ^ mix64(counter));
}

// Deterministic RNG. The engine (mt19937_64) is fully specified by the
// standard; the double/int conversions below are explicit so results do not
// depend on unspecified std::*_distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t nextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double nextDouble() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). Modulo bias is negligible for n << 2^64.
  uint64_t nextBelow(uint64_t n) { return n == 0 ? 0 : engine_() % n; }

  int nextInt(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(nextBelow(static_cast<uint64_t>(hi - lo + 1)));
  }

  bool bernoulli(double p) { return nextDouble() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace equivar
