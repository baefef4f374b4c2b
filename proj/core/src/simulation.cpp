#include "varest/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "varest/error.hpp"
#include "varest/random.hpp"
#include "varest/sampling.hpp"
#include "varest/theory.hpp"

namespace varest {

namespace {

constexpr double kFpcWarningFraction = 0.05;

// Per-thread scratch so the replication loop does not allocate.
struct Workspace {
  explicit Workspace(std::size_t population_size) : sampler(population_size) {}

  SrsworSampler sampler;
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
  std::vector<double> y, x, z, first_x, first_z;
};

struct RunStorage {
  std::size_t kinds = 0;
  std::vector<double> estimates;  // reps x kinds, row-major
  std::vector<TwoPhaseVariances> variances;
  std::vector<double> plug_in_weight;
  std::vector<unsigned char> ok;
};

struct WorkerOutcome {
  std::exception_ptr error;
  std::size_t first_failure = std::numeric_limits<std::size_t>::max();
  std::string first_failure_message;
};

void gather(std::span<const double> column, const std::vector<std::size_t>& idx,
            std::vector<double>& out) {
  out.resize(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = column[idx[i]];
}

class Replicator {
 public:
  Replicator(const Population& pop, const SimulationConfig& config, const DeltaTable& deltas)
      : pop_(pop), config_(config), aux_{pop.sx2(), pop.sz2()} {
    const bool wants_optimal =
        std::any_of(config.estimators.begin(), config.estimators.end(),
                    [](const EstimatorKind& k) {
                      return is_combined(k.tag) && std::holds_alternative<OptimalWeight>(k.weight);
                    });
    needs_plug_in_ = wants_optimal && config.weight_policy == WeightPolicy::PlugIn;
    if (wants_optimal && config.weight_policy == WeightPolicy::PopulationOptimal) {
      optimal_ = alpha_opt(deltas);
    }
  }

  // Runs replication `rep`, writing into row `rep` of storage.
  void run(std::size_t rep, Workspace& ws, RunStorage& storage) const {
    Rng rng = Rng::substream(config_.seed, rep);
    TwoPhaseVariances v;
    if (config_.nprime) {
      ws.sampler.draw(rng, *config_.nprime, ws.first);
      ws.second.assign(ws.first.begin(), ws.first.end());
      for (std::size_t i = 0; i < config_.n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(ws.second.size() - i));
        std::swap(ws.second[i], ws.second[j]);
      }
      ws.second.resize(config_.n);
      gather(pop_.x(), ws.first, ws.first_x);
      gather(pop_.z(), ws.first, ws.first_z);
      v.sx2_first = sample_variance(ws.first_x);
      v.sz2_first = sample_variance(ws.first_z);
    } else {
      ws.sampler.draw(rng, config_.n, ws.second);
    }
    gather(pop_.y(), ws.second, ws.y);
    gather(pop_.x(), ws.second, ws.x);
    gather(pop_.z(), ws.second, ws.z);
    v.sy2 = sample_variance(ws.y);
    v.sx2 = sample_variance(ws.x);
    v.sz2 = sample_variance(ws.z);
    storage.variances[rep] = v;

    double plug_in = std::numeric_limits<double>::quiet_NaN();
    if (needs_plug_in_) {
      plug_in = resolve_weight(OptimalWeight{}, Trivariate{ws.y, ws.x, ws.z}, nullptr).value;
      storage.plug_in_weight[rep] = plug_in;
    }

    const SampleVariances single{v.sy2, v.sx2, v.sz2};
    double* row = storage.estimates.data() + rep * storage.kinds;
    for (std::size_t k = 0; k < config_.estimators.size(); ++k) {
      const EstimatorKind& kind = config_.estimators[k];
      const double weight = is_combined(kind.tag) ? weight_for(kind, plug_in) : 1.0;
      row[k] = is_two_phase(kind.tag) ? evaluate_two_phase(kind.tag, v, weight)
                                      : evaluate_single_phase(kind.tag, single, aux_, weight);
    }
    storage.ok[rep] = 1;
  }

 private:
  double weight_for(const EstimatorKind& kind, double plug_in) const {
    if (const double* w = std::get_if<double>(&kind.weight)) return *w;
    switch (config_.weight_policy) {
      case WeightPolicy::Fixed: return config_.fixed_weight;
      case WeightPolicy::PopulationOptimal: return optimal_;
      case WeightPolicy::PlugIn: return plug_in;
    }
    return optimal_;
  }

  const Population& pop_;
  const SimulationConfig& config_;
  AuxKnowledge aux_;
  bool needs_plug_in_ = false;
  double optimal_ = 1.0;
};

void run_block(const Replicator& replicator, std::size_t begin, std::size_t end,
               std::size_t population_size, RunStorage& storage, WorkerOutcome& outcome) {
  try {
    Workspace ws(population_size);
    for (std::size_t rep = begin; rep < end; ++rep) {
      try {
        replicator.run(rep, ws, storage);
      } catch (const DegenerateSampleError& e) {
        storage.ok[rep] = 0;
        if (rep < outcome.first_failure) {
          outcome.first_failure = rep;
          outcome.first_failure_message = e.what();
        }
      }
    }
  } catch (...) {
    outcome.error = std::current_exception();
  }
}

EmpiricalSummary summarize_column(const RunStorage& storage, std::size_t column, double target,
                                  std::size_t completed) {
  const auto m = static_cast<double>(completed);
  const std::size_t reps = storage.ok.size();
  const auto value = [&](std::size_t rep) { return storage.estimates[rep * storage.kinds + column]; };

  double sum = 0.0, sum_sq_err = 0.0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    if (!storage.ok[rep]) continue;
    const double t = value(rep);
    sum += t;
    sum_sq_err += (t - target) * (t - target);
  }
  EmpiricalSummary s;
  s.mean = sum / m;
  s.bias = s.mean - target;
  s.mse = sum_sq_err / m;

  double dev_mean = 0.0, dev_mse = 0.0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    if (!storage.ok[rep]) continue;
    const double t = value(rep);
    const double sq = (t - target) * (t - target);
    dev_mean += (t - s.mean) * (t - s.mean);
    dev_mse += (sq - s.mse) * (sq - s.mse);
  }
  if (completed > 1) {
    s.bias_se = std::sqrt(dev_mean / (m - 1.0) / m);
    s.mse_se = std::sqrt(dev_mse / (m - 1.0) / m);
  }
  return s;
}

TheorySummary theory_for(const EstimatorKind& kind, std::optional<double> weight,
                         const PopulationSummary& pop, const SimulationConfig& config) {
  const DesignSizes single{config.n, std::nullopt};
  TheoryResult r;
  if (is_two_phase(kind.tag)) {
    r = mse_two_phase(kind.tag, pop.deltas, pop.sy2, {config.n, config.nprime}, weight);
  } else {
    r = mse_single_phase(kind.tag, pop.deltas, pop.sy2, single, weight);
  }
  TheorySummary t;
  t.bias = r.bias;
  t.mse = r.mse;
  t.formula_id = r.formula_id;
  t.valid = r.valid;
  const double baseline = var_unbiased_theory(pop.deltas, pop.sy2, single);
  if (r.mse > 0.0 && baseline > 0.0) t.pre = pre(r.mse, baseline);
  return t;
}

}  // namespace

std::string_view to_string(WeightPolicy policy) noexcept {
  switch (policy) {
    case WeightPolicy::Fixed: return "fixed";
    case WeightPolicy::PopulationOptimal: return "optimal";
    case WeightPolicy::PlugIn: return "plug-in";
  }
  return "unknown";
}

WeightPolicy parse_weight_policy(std::string_view text) {
  if (text == "fixed") return WeightPolicy::Fixed;
  if (text == "optimal") return WeightPolicy::PopulationOptimal;
  if (text == "plug-in") return WeightPolicy::PlugIn;
  throw InvalidInputError("unknown weight policy '" + std::string(text) +
                          "' (expected fixed, optimal or plug-in)");
}

void validate(const SimulationConfig& config, std::size_t population_size) {
  if (config.reps < 1) throw InvalidInputError("reps must be >= 1");
  if (config.estimators.empty()) throw InvalidInputError("no estimators requested");
  if (config.n < 2 || config.n > population_size) {
    throw InvalidInputError("sample size must satisfy 2 <= n <= N");
  }
  if (config.nprime && !(config.n < *config.nprime && *config.nprime <= population_size)) {
    throw InvalidDesignError("two-phase sizes must satisfy 2 <= n < n' <= N");
  }
  for (const EstimatorKind& kind : config.estimators) {
    if (is_two_phase(kind.tag) && !config.nprime) {
      throw InvalidDesignError(std::string(name_of(kind.tag)) +
                               " needs a first-phase size (nprime)");
    }
    if (const double* w = std::get_if<double>(&kind.weight); w && !std::isfinite(*w)) {
      throw InvalidInputError("combination weight must be finite");
    }
  }
  if (config.weight_policy == WeightPolicy::Fixed && !std::isfinite(config.fixed_weight)) {
    throw InvalidInputError("fixed weight must be finite");
  }
  if (!(config.max_failure_fraction >= 0.0)) {
    throw InvalidInputError("max_failure_fraction must be >= 0");
  }
}

PopulationSummary summarize(const Population& pop) {
  return {pop.size(), pop.sy2(), pop.sx2(), pop.sz2(), delta_table(pop)};
}

SimulationReport run_simulation(const Population& pop, const SimulationConfig& config,
                                const ReplicationObserver& observer) {
  validate(config, pop.size());

  SimulationReport report;
  report.config = config;
  report.population = summarize(pop);
  const PopulationSummary& summary = report.population;

  const auto fraction = [&](std::size_t k) {
    return static_cast<double>(k) / static_cast<double>(pop.size());
  };
  if (fraction(config.n) > kFpcWarningFraction) {
    report.warnings.push_back("n/N exceeds 0.05; first-order theory ignores the finite "
                              "population correction");
  }
  if (config.nprime && fraction(*config.nprime) > kFpcWarningFraction) {
    report.warnings.push_back("n'/N exceeds 0.05; first-order theory ignores the finite "
                              "population correction");
  }

  // The unbiased estimator is always evaluated: it is the PRE baseline.
  SimulationConfig run_config = config;
  std::size_t baseline = 0;
  {
    const auto it = std::find_if(run_config.estimators.begin(), run_config.estimators.end(),
                                 [](const EstimatorKind& k) { return k.tag == Estimator::Unbiased; });
    if (it == run_config.estimators.end()) {
      baseline = run_config.estimators.size();
      run_config.estimators.push_back({Estimator::Unbiased, OptimalWeight{}});
    } else {
      baseline = static_cast<std::size_t>(it - run_config.estimators.begin());
    }
  }

  const Replicator replicator(pop, run_config, summary.deltas);
  RunStorage storage;
  storage.kinds = run_config.estimators.size();
  storage.estimates.assign(config.reps * storage.kinds, 0.0);
  storage.variances.assign(config.reps, TwoPhaseVariances{});
  storage.plug_in_weight.assign(config.reps, std::numeric_limits<double>::quiet_NaN());
  storage.ok.assign(config.reps, 0);

  unsigned threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                         std::min<std::size_t>(config.reps, 1024))));
  std::vector<WorkerOutcome> outcomes(threads);
  {
    std::vector<std::jthread> workers;
    const std::size_t block = (config.reps + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(config.reps, t * block);
      const std::size_t end = std::min(config.reps, begin + block);
      workers.emplace_back([&, begin, end, t] {
        run_block(replicator, begin, end, pop.size(), storage, outcomes[t]);
      });
    }
  }
  for (const WorkerOutcome& outcome : outcomes) {
    if (outcome.error) std::rethrow_exception(outcome.error);
  }

  for (unsigned char ok : storage.ok) {
    if (ok) ++report.reps_completed;
  }
  report.reps_failed = config.reps - report.reps_completed;
  if (report.reps_completed == 0 || static_cast<double>(report.reps_failed) >
                                        config.max_failure_fraction *
                                            static_cast<double>(config.reps)) {
    const auto first = std::min_element(outcomes.begin(), outcomes.end(),
                                        [](const WorkerOutcome& a, const WorkerOutcome& b) {
                                          return a.first_failure < b.first_failure;
                                        });
    throw SimulationAbortedError(
        std::to_string(report.reps_failed) + " of " + std::to_string(config.reps) +
        " replications were degenerate (first at replication " +
        std::to_string(first->first_failure) + ": " + first->first_failure_message + ")");
  }

  if (observer) {
    for (std::size_t rep = 0; rep < config.reps; ++rep) {
      observer(ReplicationTrace{
          rep, storage.ok[rep] != 0, storage.variances[rep],
          std::span<const double>(storage.estimates.data() + rep * storage.kinds,
                                  config.estimators.size())});
    }
  }

  const EmpiricalSummary base =
      summarize_column(storage, baseline, summary.sy2, report.reps_completed);

  double mean_plug_in = 0.0;
  if (config.weight_policy == WeightPolicy::PlugIn) {
    for (std::size_t rep = 0; rep < config.reps; ++rep) {
      if (storage.ok[rep] && !std::isnan(storage.plug_in_weight[rep])) {
        mean_plug_in += storage.plug_in_weight[rep];
      }
    }
    mean_plug_in /= static_cast<double>(report.reps_completed);
  }

  for (std::size_t k = 0; k < config.estimators.size(); ++k) {
    const EstimatorKind& kind = config.estimators[k];
    EstimatorReport entry;
    entry.kind = kind;
    entry.empirical =
        k == baseline ? base : summarize_column(storage, k, summary.sy2, report.reps_completed);
    if (entry.empirical.mse > 0.0 && base.mse > 0.0) {
      entry.empirical.pre = pre(entry.empirical.mse, base.mse);
    }

    std::optional<double> theory_weight;
    if (is_combined(kind.tag)) {
      if (const double* w = std::get_if<double>(&kind.weight)) {
        entry.weight = *w;
        entry.weight_source = std::string(to_string(ResolvedWeight::Source::Fixed));
        theory_weight = *w;
      } else if (config.weight_policy == WeightPolicy::Fixed) {
        entry.weight = config.fixed_weight;
        entry.weight_source = std::string(to_string(ResolvedWeight::Source::Fixed));
        theory_weight = config.fixed_weight;
      } else if (config.weight_policy == WeightPolicy::PopulationOptimal) {
        entry.weight = alpha_opt(summary.deltas);
        entry.weight_source = std::string(to_string(ResolvedWeight::Source::KnownMoments));
        theory_weight = entry.weight;
      } else {
        entry.weight = mean_plug_in;
        entry.weight_source = std::string(to_string(ResolvedWeight::Source::Estimated));
        // Theory at the limiting weight the plug-in estimates.
        theory_weight = alpha_opt(summary.deltas);
      }
    }
    entry.theory = theory_for(kind, theory_weight, summary, config);
    report.estimators.push_back(std::move(entry));
  }
  return report;
}

}  // namespace varest
