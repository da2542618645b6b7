#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace amortize {

/// xoshiro256++ seeded through splitmix64.
///
/// `Rng(seed, stream)` derives an independent stream for every (seed, index)
/// pair so per-sample work can run in any order and reproduce bit-for-bit.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal();

  /// Child stream; does not advance this generator.
  Rng split(std::uint64_t index) const;

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace amortize
