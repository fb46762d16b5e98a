#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace mbflow {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a
/// master seed so that replicate results do not depend on scheduling.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Seeded generator with platform-stable sampling helpers.
///
/// std::mt19937_64 output is fully specified by the standard, but the
/// std::*_distribution adaptors are not, so sampling is done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  /// Uniform integer in [lo, hi].
  std::size_t range(std::size_t lo, std::size_t hi);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  bool chance(double p) { return p > 0.0 && uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mbflow
