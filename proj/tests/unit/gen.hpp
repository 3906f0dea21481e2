#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace stable_msu::testing {

/// Seeded draws for property tests. Failures print the case index, so a
/// failing case can be replayed with the same seed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  /// alpha in [lo, hi] kept away from rationals with tiny denominators.
  double alpha(double lo = 0.05, double hi = 0.95) { return uniform(lo, hi); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace stable_msu::testing
