#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace subdiv {

/// Seeded engine with portable bounded draws, so runs are bit-identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  /// Uniform real in [0, 1).
  double unit();

 private:
  std::mt19937_64 engine_;
};

/// Independent child seed for stream `stream` of `master` (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace subdiv
