#pragma once

// Portable seeded random numbers for reproducible test problems.
//
// Uniform bits come from xoshiro256** (Blackman & Vigna), seeded by expanding
// the 64-bit seed through splitmix64. Doubles in [0, 1) take the top 53 bits.
// Standard normals use the Marsaglia polar method, which needs only sqrt and
// log, so streams match across platforms and standard libraries.

#include <array>
#include <cstdint>

namespace krylov {

class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  /// Uniform in [0, 1).
  double uniform() noexcept;

 private:
  std::array<std::uint64_t, 4> s_;
};

class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) noexcept : rng_(seed) {}

  double operator()() noexcept;

 private:
  Xoshiro256StarStar rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace krylov
