#pragma once

#include <cstddef>
#include <vector>

#include "varest/estimators.hpp"
#include "varest/random.hpp"

namespace varest {

/// Reusable SRSWOR workspace over {0, ..., N-1}.
///
/// Each draw runs a partial Fisher-Yates shuffle over an identity index
/// array and then undoes its swaps, so a draw costs O(n) after the one-off
/// O(N) setup and the result depends only on the stream.
class SrsworSampler {
 public:
  explicit SrsworSampler(std::size_t population_size);

  [[nodiscard]] std::size_t population_size() const noexcept { return index_.size(); }

  /// Writes an n-subset into out (in draw order). Throws InvalidInputError if n > N.
  void draw(Rng& rng, std::size_t n, std::vector<std::size_t>& out);

 private:
  std::vector<std::size_t> index_;
  std::vector<std::size_t> swaps_;
};

/// Uniformly random n-subset of {0, ..., N-1}.
[[nodiscard]] std::vector<std::size_t> draw_srswor(Rng& rng, std::size_t population_size,
                                                   std::size_t n);

/// Partial Fisher-Yates on a copy of `units`; returns n of them uniformly.
[[nodiscard]] std::vector<std::size_t> subsample(Rng& rng, std::vector<std::size_t> units,
                                                 std::size_t n);

/// First phase: SRSWOR of size n' from the population. Second phase: SRSWOR
/// of size n from the first phase. Throws InvalidDesignError unless n < n' <= N.
[[nodiscard]] TwoPhaseDraw draw_two_phase(Rng& rng, std::size_t population_size,
                                          std::size_t nprime, std::size_t n);

}  // namespace varest
