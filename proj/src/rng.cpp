#include "symstable/rng.hpp"

#include <cmath>

namespace symstable {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(root) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

double Rng::uniform_open() {
  // 52 random mantissa bits, shifted half a step off zero.
  const std::uint64_t bits = engine_() >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

double Rng::exponential() { return -std::log(uniform_open()); }

}  // namespace symstable
