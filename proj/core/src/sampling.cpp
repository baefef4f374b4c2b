#include "varest/sampling.hpp"

#include <numeric>
#include <string>
#include <utility>

#include "varest/error.hpp"

namespace varest {

SrsworSampler::SrsworSampler(std::size_t population_size) : index_(population_size) {
  std::iota(index_.begin(), index_.end(), std::size_t{0});
}

void SrsworSampler::draw(Rng& rng, std::size_t n, std::vector<std::size_t>& out) {
  const std::size_t size = index_.size();
  if (n > size) {
    throw InvalidInputError("cannot draw " + std::to_string(n) + " units from " +
                            std::to_string(size));
  }
  out.resize(n);
  swaps_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(size - i));
    std::swap(index_[i], index_[j]);
    swaps_[i] = j;
    out[i] = index_[i];
  }
  for (std::size_t i = n; i-- > 0;) std::swap(index_[i], index_[swaps_[i]]);
}

std::vector<std::size_t> draw_srswor(Rng& rng, std::size_t population_size, std::size_t n) {
  if (n > population_size) {
    throw InvalidInputError("cannot draw " + std::to_string(n) + " units from " +
                            std::to_string(population_size));
  }
  SrsworSampler sampler(population_size);
  std::vector<std::size_t> out;
  sampler.draw(rng, n, out);
  return out;
}

std::vector<std::size_t> subsample(Rng& rng, std::vector<std::size_t> units, std::size_t n) {
  if (n > units.size()) throw InvalidInputError("subsample larger than its frame");
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(units.size() - i));
    std::swap(units[i], units[j]);
  }
  units.resize(n);
  return units;
}

TwoPhaseDraw draw_two_phase(Rng& rng, std::size_t population_size, std::size_t nprime,
                            std::size_t n) {
  if (!(n < nprime && nprime <= population_size)) {
    throw InvalidDesignError("two-phase sizes must satisfy n < n' <= N");
  }
  TwoPhaseDraw draw;
  draw.first_phase = draw_srswor(rng, population_size, nprime);
  draw.second_phase = subsample(rng, draw.first_phase, n);
  return draw;
}

}  // namespace varest
