#pragma once

// Deterministic random streams. Every stream is a SplitMix64 generator
// seeded from (run seed, purpose salts), so runs are reproducible
// bit-for-bit on any platform; std:: distributions are avoided because
// their output is implementation-defined.

#include <cstdint>
#include <initializer_list>

#include "vanet/bytes.hpp"

namespace vanet {

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Uniform integer in [0, bound). Rejection-free modulo is fine here:
  // bounds are tiny relative to 2^64.
  std::uint64_t next_below(std::uint64_t bound) { return bound ? next_u64() % bound : 0; }

  bool chance(double p) { return next_unit() < p; }

  Bytes next_bytes(std::size_t n) {
    Bytes out;
    out.reserve(n);
    while (out.size() < n) {
      std::uint64_t v = next_u64();
      for (int i = 0; i < 8 && out.size() < n; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    return out;
  }

 private:
  std::uint64_t state_;
};

// Stable seed derivation: fold salts into the base seed through the
// SplitMix64 output function so sibling streams are uncorrelated.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> salts) {
  Rng r(base);
  std::uint64_t s = r.next_u64();
  for (auto salt : salts) {
    Rng m(s ^ (salt + 0x9e3779b97f4a7c15ULL));
    s = m.next_u64();
  }
  return s;
}

}  // namespace vanet
