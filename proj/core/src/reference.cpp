#include "varest/reference.hpp"

#include <cmath>

#include "varest/theory.hpp"

namespace varest {

std::vector<ReferenceCell> reproduce_reference_tables(double tolerance) {
  const DeltaTable d = reference_deltas();
  constexpr double sy2 = 1.0;
  const DesignSizes single{kReferenceSampleSize, std::nullopt};
  const DesignSizes two{kReferenceSampleSize, kReferenceNPrime};
  const double base = var_unbiased_theory(d, sy2, single);

  std::vector<ReferenceCell> cells{
      {"single-phase", "unbiased", 100.0, 100.0},
      {"single-phase", "exp-ratio", 214.35,
       pre(mse_single_phase(Estimator::ExpRatio, d, sy2, single).mse, base)},
      {"single-phase", "exp-product", 42.90,
       pre(mse_single_phase(Estimator::ExpProduct, d, sy2, single).mse, base)},
      {"single-phase", "combined", 215.47, pre(min_mse_combined(d, sy2, single).mse, base)},
      {"two-phase", "unbiased", 100.0, 100.0},
      {"two-phase", "exp-ratio-2p", 1470.76,
       pre(mse_two_phase(Estimator::ExpRatioTwoPhase, d, sy2, two).mse, base)},
      {"two-phase", "exp-product-2p", 513.86,
       pre(mse_two_phase(Estimator::ExpProductTwoPhase, d, sy2, two).mse, base)},
      {"two-phase", "combined-2p", 1472.77, pre(min_mse_combined(d, sy2, two).mse, base)},
  };
  for (ReferenceCell& cell : cells) {
    cell.relative_deviation = std::abs(cell.computed - cell.published) / cell.published;
    cell.consistent = cell.relative_deviation <= tolerance;
  }
  return cells;
}

}  // namespace varest
