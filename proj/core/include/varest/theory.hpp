#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "varest/estimators.hpp"
#include "varest/moments.hpp"

namespace varest {

/// Sample sizes of the design. nprime is the first-phase size and is present
/// only when a two-phase formula is evaluated.
struct DesignSizes {
  std::size_t n = 2;
  std::optional<std::size_t> nprime;
};

/// First-order theoretical properties of one estimator.
///
/// formula_id names the estimator and quantity, suffixed with ":published"
/// when the expression agrees with the published one and ":corrected" when
/// it is the re-derived form (see formula_corrections()).
struct TheoryResult {
  std::optional<double> bias;
  double mse = 0.0;
  std::string formula_id;
  /// False when the supplied moment table makes the MSE negative.
  bool valid = true;
};

/// var(s_y^2) = (S_y^4 / n)(d400 - 1), finite population correction ignored.
[[nodiscard]] double var_unbiased_theory(const DeltaTable& deltas, double sy2,
                                         const DesignSizes& sizes);

/// First-order MSE of a single-phase estimator. weight is required for Combined.
[[nodiscard]] TheoryResult mse_single_phase(Estimator kind, const DeltaTable& deltas, double sy2,
                                            const DesignSizes& sizes,
                                            std::optional<double> weight = std::nullopt);

/// Second-order bias of ExpRatio, ExpProduct and Combined; zero for Unbiased.
/// Throws InvalidInputError for kinds without a bias expression.
[[nodiscard]] double bias_single_phase(Estimator kind, const DeltaTable& deltas, double sy2,
                                       const DesignSizes& sizes,
                                       std::optional<double> weight = std::nullopt);

/// First-order MSE of a two-phase estimator. Requires sizes.nprime.
[[nodiscard]] TheoryResult mse_two_phase(Estimator kind, const DeltaTable& deltas, double sy2,
                                         const DesignSizes& sizes,
                                         std::optional<double> weight = std::nullopt);

/// Two-phase MSE with the sampling rates 1/n and 1/n' given directly, so the
/// limit 1/n' -> 0 can be evaluated exactly.
[[nodiscard]] double mse_two_phase_rates(Estimator kind, const DeltaTable& deltas, double sy2,
                                         double inv_n, double inv_nprime,
                                         std::optional<double> weight = std::nullopt);

/// Percent relative efficiency 100 * baseline / candidate.
[[nodiscard]] double pre(double mse_candidate, double mse_baseline);

struct OptimalCombination {
  double weight = 0.0;
  double mse = 0.0;
};

/// Optimal weight and the MSE it attains: single-phase when sizes.nprime is
/// empty, two-phase otherwise.
[[nodiscard]] OptimalCombination min_mse_combined(const DeltaTable& deltas, double sy2,
                                                  const DesignSizes& sizes);

/// Published moment table of the reference production dataset (N = 80,
/// n' = 25, n = 10). d022 = 3.14 is an interpretation of a mislabelled entry.
[[nodiscard]] DeltaTable reference_deltas() noexcept;
inline constexpr std::size_t kReferenceN = 80;
inline constexpr std::size_t kReferenceNPrime = 25;
inline constexpr std::size_t kReferenceSampleSize = 10;
inline constexpr std::string_view kReferenceD022Note =
    "d022 = 3.14 interpreted (published entry is labelled d400)";

/// One published expression that this library evaluates in a corrected form,
/// with the consistency check that forces the correction.
struct FormulaCorrection {
  std::string formula_id;
  std::string published;
  std::string corrected;
  std::string check;
};

[[nodiscard]] const std::vector<FormulaCorrection>& formula_corrections();

}  // namespace varest
