#pragma once

#include <cstdint>
#include <random>

namespace vqi {

// Deterministic random stream: the engine is the standard-specified
// mt19937_64 and the Poisson sampler is implemented here rather than taken
// from <random>, whose distributions are not bit-reproducible across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Poisson variate: sequential inversion for small means, transformed
  // rejection (PTRS) for mean >= 10.
  std::int64_t poisson(double mean);

  // Independent sub-stream seed for (master seed, index), via splitmix64.
  static std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index);

 private:
  std::mt19937_64 gen_;
};

}  // namespace vqi
