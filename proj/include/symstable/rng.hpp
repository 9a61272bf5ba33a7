#pragma once

#include <cstdint>
#include <random>

namespace symstable {

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of the index-th task spawned from a root seed. Pure function, so a
/// parallel run reproduces the serial one exactly.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept;

/// Reproducible 64-bit generator. std::mt19937_64's output sequence is fixed
/// by the standard; the conversions to floating point are done here because
/// the standard distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on (0, 1): never returns 0 or 1.
  double uniform_open();

  /// Uniform on (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_open(); }

  /// Standard exponential, strictly positive.
  double exponential();

 private:
  std::mt19937_64 engine_;
};

}  // namespace symstable
