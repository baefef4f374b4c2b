#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "varest/moments.hpp"
#include "varest/population.hpp"

namespace varest {

enum class Estimator {
  Unbiased,
  IsakiRatio,
  ExpRatio,
  ExpProduct,
  Combined,
  ExpRatioTwoPhase,
  ExpProductTwoPhase,
  CombinedTwoPhase,
};

/// Marker for "use the MSE-minimizing combination weight".
struct OptimalWeight {
  friend bool operator==(OptimalWeight, OptimalWeight) = default;
};

using WeightSpec = std::variant<double, OptimalWeight>;

/// An estimator together with its combination weight. The weight is only
/// read for Combined and CombinedTwoPhase; it may lie outside [0, 1].
struct EstimatorKind {
  Estimator tag = Estimator::Unbiased;
  WeightSpec weight = OptimalWeight{};

  friend bool operator==(const EstimatorKind&, const EstimatorKind&) = default;
};

[[nodiscard]] bool is_two_phase(Estimator e) noexcept;
[[nodiscard]] bool is_combined(Estimator e) noexcept;

/// Canonical names: unbiased, isaki, exp-ratio, exp-product, combined,
/// exp-ratio-2p, exp-product-2p, combined-2p.
[[nodiscard]] std::string_view name_of(Estimator e) noexcept;

/// "combined:0.75" for explicit weights, "combined" for the optimal weight.
[[nodiscard]] std::string to_string(const EstimatorKind& kind);

/// Inverse of to_string. Throws InvalidInputError on unknown names.
[[nodiscard]] EstimatorKind parse_estimator_kind(std::string_view text);

/// Comma-separated list of kinds; "all" expands to every kind valid for the design.
[[nodiscard]] std::vector<EstimatorKind> parse_estimator_list(std::string_view text,
                                                              bool two_phase_design);

/// Known population variances of the auxiliaries.
struct AuxKnowledge {
  double sx2 = 1.0;
  double sz2 = 1.0;
};

/// Divisor-(n-1) variances of one single-phase sample.
struct SampleVariances {
  double sy2 = 0.0;
  double sx2 = 0.0;
  double sz2 = 0.0;
};

/// Variances observed under two-phase sampling. The y variance and the
/// second-phase auxiliary variances come from s; the primed ones from s'.
struct TwoPhaseVariances {
  double sy2 = 0.0;
  double sx2 = 0.0;
  double sz2 = 0.0;
  double sx2_first = 0.0;
  double sz2_first = 0.0;
};

[[nodiscard]] SampleVariances sample_variances(const Trivariate& sample);

/// Estimator value from precomputed variances with a resolved weight.
/// Throws DegenerateSampleError when s_x^2 == 0 for a ratio-type kind.
[[nodiscard]] double evaluate_single_phase(Estimator tag, const SampleVariances& v,
                                           const AuxKnowledge& aux, double weight = 1.0);
[[nodiscard]] double evaluate_two_phase(Estimator tag, const TwoPhaseVariances& v,
                                        double weight = 1.0);

/// Weight actually applied to a combined estimator and where it came from.
struct ResolvedWeight {
  enum class Source { Fixed, KnownMoments, Estimated };
  double value = 1.0;
  Source source = Source::Fixed;
};

[[nodiscard]] std::string_view to_string(ResolvedWeight::Source source) noexcept;

/// Explicit weights pass through; OptimalWeight uses alpha_opt(*known) when
/// known moments are supplied and otherwise plugs in divisor-n moments of
/// the given sample.
[[nodiscard]] ResolvedWeight resolve_weight(const WeightSpec& spec, const Trivariate& sample,
                                            const DeltaTable* known);

/// Point estimate of S_y^2 from a single-phase sample.
[[nodiscard]] double estimate_single_phase(const EstimatorKind& kind, const Trivariate& sample,
                                           const AuxKnowledge& aux,
                                           const DeltaTable* known = nullptr);

/// Nested index sets: second_phase is drawn from first_phase.
struct TwoPhaseDraw {
  std::vector<std::size_t> first_phase;
  std::vector<std::size_t> second_phase;
};

/// Throws InvalidDesignError unless second_phase is a subset of first_phase,
/// indices are unique and in range, and 2 <= n < n' <= N.
void validate_draw(const TwoPhaseDraw& draw, std::size_t population_size);

/// Values visible under two-phase sampling: y only on the second phase.
class TwoPhaseSample {
 public:
  TwoPhaseSample(std::vector<double> y, std::vector<double> x, std::vector<double> z,
                 std::vector<double> first_x, std::vector<double> first_z);

  /// Copies the observable values out of a population for the given draw.
  [[nodiscard]] static TwoPhaseSample gather(const Population& pop, const TwoPhaseDraw& draw);

  [[nodiscard]] Trivariate second_phase() const noexcept { return {y_, x_, z_}; }
  [[nodiscard]] std::span<const double> first_x() const noexcept { return first_x_; }
  [[nodiscard]] std::span<const double> first_z() const noexcept { return first_z_; }
  [[nodiscard]] TwoPhaseVariances variances() const;

 private:
  std::vector<double> y_, x_, z_;
  std::vector<double> first_x_, first_z_;
};

/// Point estimate of S_y^2 from a two-phase sample.
[[nodiscard]] double estimate_two_phase(const EstimatorKind& kind, const TwoPhaseSample& sample,
                                        const DeltaTable* known = nullptr);

/// Convenience: gathers the draw from pop, then estimates.
[[nodiscard]] double estimate_two_phase(const EstimatorKind& kind, const Population& pop,
                                        const TwoPhaseDraw& draw,
                                        const DeltaTable* known = nullptr);

/// MSE-minimizing weight of the combined single-phase estimator.
/// Throws NoUniqueOptimumError when d040 + d004 + 2 d022 - 4 == 0.
[[nodiscard]] double alpha_opt(const DeltaTable& deltas);

/// MSE-minimizing weight of the combined two-phase estimator (same minimizer).
[[nodiscard]] double k_opt(const DeltaTable& deltas);

}  // namespace varest
