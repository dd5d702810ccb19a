#pragma once

#include <cstdint>
#include <random>

namespace grnrules {

// Seeded random stream with a fixed draw discipline. All sampling goes
// through these helpers rather than std::uniform_*_distribution so that a
// given seed produces the same sequence on every platform and compiler.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform integer in [0, n). Requires n >= 1.
  int below(int n) {
    return static_cast<int>((static_cast<unsigned __int128>(gen_()) *
                             static_cast<std::uint64_t>(n)) >>
                            64);
  }

  // Uniform integer in [lo, hi], inclusive.
  int range(int lo, int hi) { return lo + below(hi - lo + 1); }

  // Uniform real in [0, 1).
  double unit() { return (gen_() >> 11) * 0x1.0p-53; }

  // Uniform real in [lo, hi).
  double real(double lo, double hi) { return lo + (hi - lo) * unit(); }

  bool coin() { return (gen_() & 1) != 0; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace grnrules
