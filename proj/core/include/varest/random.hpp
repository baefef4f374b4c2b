#pragma once

#include <cstdint>
#include <limits>

namespace varest {

/// SplitMix64 finalizer; bijective mixing of a 64-bit word.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// xoshiro256** generator. Output is identical on every platform, which the
/// report determinism contract relies on (std distributions are not).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  /// Independent stream for replication `index` of a run seeded with `master`.
  /// Depends only on (master, index), never on scheduling.
  [[nodiscard]] static Rng substream(std::uint64_t master, std::uint64_t index) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Uniform integer on [0, bound); bound must be > 0. Unbiased (Lemire).
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Standard normal deviate (Marsaglia polar method).
  double normal() noexcept;

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace varest
