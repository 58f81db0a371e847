#pragma once

#include <cstdint>
#include <random>

namespace plap {

// Seeded RNG used by the harness and tests. The engine (mt19937_64) is
// bit-exact by the standard; the double mappings below are done by hand
// because std::*_distribution algorithms are implementation-defined and
// would break byte-identical reports across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace plap
