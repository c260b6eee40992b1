#pragma once

#include <cstdint>
#include <random>

namespace simt {

/// Seeded generator with a fully specified output sequence on every platform:
/// std::mt19937_64 (bit-exact by the standard) seeded with the raw 64-bit
/// seed, plus our own bounded draws instead of the implementation-defined
/// std::uniform_int_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi], by rejection sampling on the top of the
  /// 64-bit range so every value is exactly equally likely.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);

  /// Uniform double in [0, 1) from the top 53 bits.
  double unit();

  /// Seed for an independent child stream, e.g. one shard of a run.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

}  // namespace simt
