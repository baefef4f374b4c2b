#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "varest/estimators.hpp"
#include "varest/moments.hpp"
#include "varest/population.hpp"

namespace varest {

/// How a combined estimator requested with OptimalWeight gets its weight.
/// Explicit weights inside an EstimatorKind are always used as given.
enum class WeightPolicy {
  Fixed,              ///< SimulationConfig::fixed_weight
  PopulationOptimal,  ///< alpha_opt of the population moment table (known moments)
  PlugIn,             ///< alpha_opt of divisor-n moments of each drawn sample
};

[[nodiscard]] std::string_view to_string(WeightPolicy policy) noexcept;
[[nodiscard]] WeightPolicy parse_weight_policy(std::string_view text);

struct SimulationConfig {
  std::size_t n = 2;
  /// First-phase size. When present every replication draws the nested
  /// design and single-phase estimators use the second-phase sample, which
  /// is marginally an SRSWOR of size n.
  std::optional<std::size_t> nprime;
  std::size_t reps = 1;
  std::uint64_t seed = 0;
  std::vector<EstimatorKind> estimators;
  WeightPolicy weight_policy = WeightPolicy::PopulationOptimal;
  double fixed_weight = 1.0;
  /// Worker threads; 0 means hardware concurrency. Never affects results.
  unsigned threads = 0;
  /// Runs with a larger fraction of degenerate replications are aborted.
  double max_failure_fraction = 0.001;
};

/// Throws InvalidInputError / InvalidDesignError for configurations that
/// cannot run on a population of the given size.
void validate(const SimulationConfig& config, std::size_t population_size);

struct PopulationSummary {
  std::size_t size = 0;
  double sy2 = 0.0;
  double sx2 = 0.0;
  double sz2 = 0.0;
  DeltaTable deltas;
};

[[nodiscard]] PopulationSummary summarize(const Population& pop);

struct EmpiricalSummary {
  double mean = 0.0;
  double bias = 0.0;     ///< mean - S_y^2
  double bias_se = 0.0;  ///< standard error of the mean estimate
  double mse = 0.0;      ///< mean of (estimate - S_y^2)^2
  double mse_se = 0.0;
  std::optional<double> pre;  ///< vs the unbiased estimator on the same draws
};

struct TheorySummary {
  std::optional<double> bias;
  double mse = 0.0;
  std::optional<double> pre;
  std::string formula_id;
  bool valid = true;
};

struct EstimatorReport {
  EstimatorKind kind;
  /// Weight applied (mean over replications for plug-in weights); empty for
  /// non-combined estimators.
  std::optional<double> weight;
  std::string weight_source;
  EmpiricalSummary empirical;
  std::optional<TheorySummary> theory;
};

struct SimulationReport {
  PopulationSummary population;
  SimulationConfig config;
  std::size_t reps_completed = 0;
  std::size_t reps_failed = 0;
  std::vector<EstimatorReport> estimators;
  std::vector<std::string> warnings;
};

/// Per-replication view handed to an observer after the run, in
/// replication order. estimates[i] belongs to config.estimators[i].
struct ReplicationTrace {
  std::size_t index = 0;
  bool ok = false;
  TwoPhaseVariances variances;
  std::span<const double> estimates;
};

using ReplicationObserver = std::function<void(const ReplicationTrace&)>;

/// Replicated design-based evaluation of the configured estimators.
///
/// Replication r draws its design from Rng::substream(seed, r); every
/// estimator is evaluated on that same draw. Results are reduced in
/// replication order, so the report is a pure function of (pop, config)
/// regardless of thread count. Degenerate draws are counted as failed; more
/// than max_failure_fraction of them throws SimulationAbortedError.
[[nodiscard]] SimulationReport run_simulation(const Population& pop,
                                              const SimulationConfig& config,
                                              const ReplicationObserver& observer = {});

}  // namespace varest
