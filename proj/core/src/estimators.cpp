#include "varest/estimators.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "varest/error.hpp"

namespace varest {

namespace {

constexpr std::array<Estimator, 8> kAllEstimators{
    Estimator::Unbiased,         Estimator::IsakiRatio,         Estimator::ExpRatio,
    Estimator::ExpProduct,       Estimator::Combined,           Estimator::ExpRatioTwoPhase,
    Estimator::ExpProductTwoPhase, Estimator::CombinedTwoPhase};

// exp[(known - observed) / (known + observed)]: shrinks when observed overshoots.
double ratio_factor(double known, double observed) {
  return std::exp((known - observed) / (known + observed));
}

// exp[(observed - known) / (observed + known)]: grows when observed overshoots.
double product_factor(double known, double observed) {
  return std::exp((observed - known) / (observed + known));
}

void require_positive_aux(const AuxKnowledge& aux) {
  if (!(aux.sx2 > 0.0) || !std::isfinite(aux.sx2) || !(aux.sz2 > 0.0) ||
      !std::isfinite(aux.sz2)) {
    throw InvalidInputError("known auxiliary variances must be finite and > 0");
  }
}

void require_sx2(double sx2) {
  if (!(sx2 > 0.0)) throw DegenerateSampleError("sample variance of x is zero");
}

double optimal_weight(const DeltaTable& d) {
  require_finite(d);
  const double denominator = d.d040 + d.d004 + 2.0 * d.d022 - 4.0;
  if (denominator == 0.0) {
    throw NoUniqueOptimumError("d040 + d004 + 2 d022 - 4 is zero; MSE is flat in the weight");
  }
  const double numerator = d.d004 + 2.0 * (d.d220 + d.d202) + d.d022 - 6.0;
  return numerator / denominator;
}

}  // namespace

bool is_two_phase(Estimator e) noexcept {
  return e == Estimator::ExpRatioTwoPhase || e == Estimator::ExpProductTwoPhase ||
         e == Estimator::CombinedTwoPhase;
}

bool is_combined(Estimator e) noexcept {
  return e == Estimator::Combined || e == Estimator::CombinedTwoPhase;
}

std::string_view name_of(Estimator e) noexcept {
  switch (e) {
    case Estimator::Unbiased: return "unbiased";
    case Estimator::IsakiRatio: return "isaki";
    case Estimator::ExpRatio: return "exp-ratio";
    case Estimator::ExpProduct: return "exp-product";
    case Estimator::Combined: return "combined";
    case Estimator::ExpRatioTwoPhase: return "exp-ratio-2p";
    case Estimator::ExpProductTwoPhase: return "exp-product-2p";
    case Estimator::CombinedTwoPhase: return "combined-2p";
  }
  return "unknown";
}

std::string to_string(const EstimatorKind& kind) {
  std::string out(name_of(kind.tag));
  if (is_combined(kind.tag)) {
    if (const double* w = std::get_if<double>(&kind.weight)) {
      std::array<char, 32> buf{};
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), *w);
      out += ':';
      out.append(buf.data(), res.ptr);
    }
  }
  return out;
}

EstimatorKind parse_estimator_kind(std::string_view text) {
  std::string_view name = text;
  std::optional<double> weight;
  if (const auto colon = text.find(':'); colon != std::string_view::npos) {
    name = text.substr(0, colon);
    const std::string_view value = text.substr(colon + 1);
    double parsed = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size() ||
        !std::isfinite(parsed)) {
      throw InvalidInputError("bad weight in estimator '" + std::string(text) + "'");
    }
    weight = parsed;
  }
  for (Estimator e : kAllEstimators) {
    if (name_of(e) != name) continue;
    if (weight && !is_combined(e)) {
      throw InvalidInputError("estimator '" + std::string(name) + "' takes no weight");
    }
    EstimatorKind kind{e, OptimalWeight{}};
    if (weight) kind.weight = *weight;
    return kind;
  }
  throw InvalidInputError("unknown estimator '" + std::string(text) + "'");
}

std::vector<EstimatorKind> parse_estimator_list(std::string_view text, bool two_phase_design) {
  std::vector<EstimatorKind> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = std::min(text.find(',', start), text.size());
    const std::string_view item = text.substr(start, comma - start);
    if (item == "all") {
      for (Estimator e : kAllEstimators) {
        if (!is_two_phase(e) || two_phase_design) out.push_back({e, OptimalWeight{}});
      }
    } else if (!item.empty()) {
      out.push_back(parse_estimator_kind(item));
    }
    start = comma + 1;
  }
  if (out.empty()) throw InvalidInputError("empty estimator list");
  return out;
}

SampleVariances sample_variances(const Trivariate& sample) {
  return {sample_variance(sample.y), sample_variance(sample.x), sample_variance(sample.z)};
}

double evaluate_single_phase(Estimator tag, const SampleVariances& v, const AuxKnowledge& aux,
                             double weight) {
  require_positive_aux(aux);
  switch (tag) {
    case Estimator::Unbiased:
      return v.sy2;
    case Estimator::IsakiRatio:
      require_sx2(v.sx2);
      return v.sy2 * aux.sx2 / v.sx2;
    case Estimator::ExpRatio:
      require_sx2(v.sx2);
      return v.sy2 * ratio_factor(aux.sx2, v.sx2);
    case Estimator::ExpProduct:
      return v.sy2 * product_factor(aux.sz2, v.sz2);
    case Estimator::Combined:
      require_sx2(v.sx2);
      return v.sy2 * (weight * ratio_factor(aux.sx2, v.sx2) +
                      (1.0 - weight) * product_factor(aux.sz2, v.sz2));
    default:
      throw InvalidInputError(std::string(name_of(tag)) + " is not a single-phase estimator");
  }
}

double evaluate_two_phase(Estimator tag, const TwoPhaseVariances& v, double weight) {
  const auto product_term = [&] {
    if (!(v.sz2 + v.sz2_first > 0.0)) {
      throw DegenerateSampleError("sample variances of z are zero in both phases");
    }
    return product_factor(v.sz2_first, v.sz2);
  };
  switch (tag) {
    case Estimator::Unbiased:
      return v.sy2;
    case Estimator::ExpRatioTwoPhase:
      require_sx2(v.sx2);
      return v.sy2 * ratio_factor(v.sx2_first, v.sx2);
    case Estimator::ExpProductTwoPhase:
      return v.sy2 * product_term();
    case Estimator::CombinedTwoPhase:
      require_sx2(v.sx2);
      return v.sy2 * (weight * ratio_factor(v.sx2_first, v.sx2) + (1.0 - weight) * product_term());
    default:
      throw InvalidInputError(std::string(name_of(tag)) + " is not a two-phase estimator");
  }
}

std::string_view to_string(ResolvedWeight::Source source) noexcept {
  switch (source) {
    case ResolvedWeight::Source::Fixed: return "fixed";
    case ResolvedWeight::Source::KnownMoments: return "known moments";
    case ResolvedWeight::Source::Estimated: return "estimated weight";
  }
  return "unknown";
}

ResolvedWeight resolve_weight(const WeightSpec& spec, const Trivariate& sample,
                              const DeltaTable* known) {
  if (const double* w = std::get_if<double>(&spec)) {
    if (!std::isfinite(*w)) throw InvalidInputError("combination weight must be finite");
    return {*w, ResolvedWeight::Source::Fixed};
  }
  if (known != nullptr) return {alpha_opt(*known), ResolvedWeight::Source::KnownMoments};
  try {
    return {alpha_opt(delta_table(sample)), ResolvedWeight::Source::Estimated};
  } catch (const DegeneratePopulationError& e) {
    throw DegenerateSampleError(std::string("cannot estimate weight: ") + e.what());
  } catch (const NoUniqueOptimumError& e) {
    throw DegenerateSampleError(std::string("cannot estimate weight: ") + e.what());
  }
}

double estimate_single_phase(const EstimatorKind& kind, const Trivariate& sample,
                             const AuxKnowledge& aux, const DeltaTable* known) {
  if (is_two_phase(kind.tag)) {
    throw InvalidInputError(std::string(name_of(kind.tag)) + " is not a single-phase estimator");
  }
  if (sample.x.size() != sample.size() || sample.z.size() != sample.size()) {
    throw InvalidInputError("sample columns differ in length");
  }
  const SampleVariances v = sample_variances(sample);
  double weight = 1.0;
  if (is_combined(kind.tag)) weight = resolve_weight(kind.weight, sample, known).value;
  return evaluate_single_phase(kind.tag, v, aux, weight);
}

void validate_draw(const TwoPhaseDraw& draw, std::size_t population_size) {
  const std::size_t n = draw.second_phase.size();
  const std::size_t nprime = draw.first_phase.size();
  if (n < 2) throw InvalidInputError("second phase needs at least 2 units");
  if (!(n < nprime && nprime <= population_size)) {
    throw InvalidDesignError("two-phase sizes must satisfy 2 <= n < n' <= N");
  }
  std::vector<std::size_t> first = draw.first_phase;
  std::sort(first.begin(), first.end());
  if (std::adjacent_find(first.begin(), first.end()) != first.end()) {
    throw InvalidDesignError("first phase has repeated units");
  }
  if (first.back() >= population_size) throw InvalidDesignError("first phase index out of range");
  std::vector<std::size_t> second = draw.second_phase;
  std::sort(second.begin(), second.end());
  if (std::adjacent_find(second.begin(), second.end()) != second.end()) {
    throw InvalidDesignError("second phase has repeated units");
  }
  if (!std::includes(first.begin(), first.end(), second.begin(), second.end())) {
    throw InvalidDesignError("second phase is not a subset of the first phase");
  }
}

TwoPhaseSample::TwoPhaseSample(std::vector<double> y, std::vector<double> x,
                               std::vector<double> z, std::vector<double> first_x,
                               std::vector<double> first_z)
    : y_(std::move(y)),
      x_(std::move(x)),
      z_(std::move(z)),
      first_x_(std::move(first_x)),
      first_z_(std::move(first_z)) {
  if (x_.size() != y_.size() || z_.size() != y_.size()) {
    throw InvalidInputError("second-phase columns differ in length");
  }
  if (first_x_.size() != first_z_.size()) {
    throw InvalidInputError("first-phase columns differ in length");
  }
  if (y_.size() < 2 || first_x_.size() < 2) {
    throw InvalidInputError("each phase needs at least 2 units");
  }
  if (first_x_.size() <= y_.size()) {
    throw InvalidDesignError("first phase must be larger than the second phase");
  }
}

TwoPhaseSample TwoPhaseSample::gather(const Population& pop, const TwoPhaseDraw& draw) {
  validate_draw(draw, pop.size());
  const auto pick = [](std::span<const double> column, const std::vector<std::size_t>& idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(column[i]);
    return out;
  };
  return TwoPhaseSample(pick(pop.y(), draw.second_phase), pick(pop.x(), draw.second_phase),
                        pick(pop.z(), draw.second_phase), pick(pop.x(), draw.first_phase),
                        pick(pop.z(), draw.first_phase));
}

TwoPhaseVariances TwoPhaseSample::variances() const {
  return {sample_variance(y_), sample_variance(x_), sample_variance(z_),
          sample_variance(first_x_), sample_variance(first_z_)};
}

double estimate_two_phase(const EstimatorKind& kind, const TwoPhaseSample& sample,
                          const DeltaTable* known) {
  if (!is_two_phase(kind.tag)) {
    throw InvalidInputError(std::string(name_of(kind.tag)) + " is not a two-phase estimator");
  }
  double weight = 1.0;
  if (is_combined(kind.tag)) {
    weight = resolve_weight(kind.weight, sample.second_phase(), known).value;
  }
  return evaluate_two_phase(kind.tag, sample.variances(), weight);
}

double estimate_two_phase(const EstimatorKind& kind, const Population& pop,
                          const TwoPhaseDraw& draw, const DeltaTable* known) {
  return estimate_two_phase(kind, TwoPhaseSample::gather(pop, draw), known);
}

double alpha_opt(const DeltaTable& deltas) { return optimal_weight(deltas); }

double k_opt(const DeltaTable& deltas) { return optimal_weight(deltas); }

}  // namespace varest
