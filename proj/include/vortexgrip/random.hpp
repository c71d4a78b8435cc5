#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace vortexgrip {

// The standard distributions are implementation-defined, so generated
// datasets would differ between standard libraries. These helpers only use
// std::mt19937_64 (fully specified) and fixed transforms on top of it.

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Order-sensitive combination of 64-bit words into one stable hash.
std::uint64_t stable_hash(std::initializer_list<std::uint64_t> words) noexcept;

/// Bit pattern of a double, with -0.0 folded onto +0.0.
std::uint64_t double_bits(double value) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);
  /// Standard normal via Box-Muller (cosine branch only).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace vortexgrip
