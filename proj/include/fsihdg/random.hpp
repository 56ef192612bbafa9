#pragma once
// Small deterministic pseudo-random generator (xorshift64*): used for
// reproducible randomized checks (operator symmetry probes, random test
// fields) independent of the standard library's engine implementations.

#include <cstdint>

namespace fsihdg {

struct Xorshift64 {
  std::uint64_t state;

  explicit Xorshift64(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {
    std::uint64_t x = state;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state = x;
    return x * 0x2545f4914f6cdd1dULL;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }
};

}  // namespace fsihdg
