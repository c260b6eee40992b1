#include "simt/rng.hpp"

#include <limits>

#include "simt/error.hpp"

namespace simt {

std::uint64_t Rng::uniform(std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) throw RangeError("empty uniform range");
  const std::uint64_t span = hi - lo;
  if (span == std::numeric_limits<std::uint64_t>::max()) return next();
  const std::uint64_t buckets = span + 1;
  // Largest multiple of `buckets` that fits; draws at or above it are rejected.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              (std::numeric_limits<std::uint64_t>::max() % buckets + 1) % buckets;
  std::uint64_t draw = next();
  while (draw > limit) draw = next();
  return lo + draw % buckets;
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined input.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace simt
