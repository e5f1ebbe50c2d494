#pragma once

#include <cstdint>
#include <random>

namespace cct {

/// Portable seeded generator.
///
/// The bit stream is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. The standard distributions are implementation-defined, so
/// every derived draw below is computed here from raw 64-bit words:
///
///   uniform()     (word >> 11) * 2^-53, in [0, 1)
///   normal(m, s)  Box-Muller cosine branch, u1 = 1 - uniform(), u2 = uniform()
///   poisson(l)    Knuth multiplication method
///
/// Scenario files generated from the same seed are therefore identical across
/// compilers and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal(double mean, double stddev);
  bool bernoulli(double p) { return uniform() < p; }
  int poisson(double lambda);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used for stateless per-pixel hashing.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace cct
