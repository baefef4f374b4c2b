#include "varest/theory.hpp"

#include <cmath>
#include <string>

#include "varest/error.hpp"

namespace varest {

namespace {

// Centered moments: each entry minus its value under independence/degeneracy.
struct Centered {
  double y, x, z, yx, yz, xz;
};

Centered center(const DeltaTable& d) {
  return {d.d400 - 1.0, d.d040 - 1.0, d.d004 - 1.0, d.d220 - 1.0, d.d202 - 1.0, d.d022 - 1.0};
}

void check_inputs(const DeltaTable& deltas, double sy2) {
  require_finite(deltas);
  if (!(sy2 > 0.0) || !std::isfinite(sy2)) throw InvalidInputError("S_y^2 must be finite and > 0");
}

void check_sizes(const DesignSizes& sizes, bool need_nprime) {
  if (sizes.n < 2) throw InvalidInputError("sample size n must be >= 2");
  if (need_nprime && !sizes.nprime) {
    throw InvalidDesignError("two-phase formula requires the first-phase size n'");
  }
  if (sizes.nprime && *sizes.nprime <= sizes.n) {
    throw InvalidDesignError("first-phase size n' must exceed n");
  }
}

double require_weight(Estimator kind, std::optional<double> weight) {
  if (!weight) {
    throw InvalidInputError(std::string(name_of(kind)) + " requires a combination weight");
  }
  if (!std::isfinite(*weight)) throw InvalidInputError("combination weight must be finite");
  return *weight;
}

// Contribution of the auxiliary terms, per unit of the auxiliary sampling rate.
double auxiliary_bracket(Estimator kind, const Centered& c, std::optional<double> weight) {
  switch (kind) {
    case Estimator::Unbiased:
      return 0.0;
    case Estimator::IsakiRatio:
      return c.x - 2.0 * c.yx;
    case Estimator::ExpRatio:
    case Estimator::ExpRatioTwoPhase:
      return c.x / 4.0 - c.yx;
    case Estimator::ExpProduct:
    case Estimator::ExpProductTwoPhase:
      return c.z / 4.0 + c.yz;
    case Estimator::Combined:
    case Estimator::CombinedTwoPhase: {
      const double a = require_weight(kind, weight);
      return a * a / 4.0 * c.x + (1.0 - a) * (1.0 - a) / 4.0 * c.z - a * c.yx +
             (1.0 - a) * c.yz - a * (1.0 - a) / 2.0 * c.xz;
    }
  }
  return 0.0;
}

std::string single_phase_id(Estimator kind, std::string_view quantity) {
  const bool corrected = kind == Estimator::ExpRatio || kind == Estimator::Combined;
  return std::string(name_of(kind)) + "." + std::string(quantity) +
         (corrected ? ":corrected" : ":published");
}

std::string two_phase_id(Estimator kind) {
  if (kind == Estimator::Unbiased) return "unbiased.variance:published";
  return std::string(name_of(kind)) +
         (kind == Estimator::CombinedTwoPhase ? ".mse:corrected" : ".mse:published");
}

}  // namespace

double var_unbiased_theory(const DeltaTable& deltas, double sy2, const DesignSizes& sizes) {
  check_inputs(deltas, sy2);
  check_sizes(sizes, false);
  return sy2 * sy2 / static_cast<double>(sizes.n) * (deltas.d400 - 1.0);
}

TheoryResult mse_single_phase(Estimator kind, const DeltaTable& deltas, double sy2,
                              const DesignSizes& sizes, std::optional<double> weight) {
  if (is_two_phase(kind)) {
    throw InvalidInputError(std::string(name_of(kind)) + " is a two-phase estimator");
  }
  check_inputs(deltas, sy2);
  check_sizes(sizes, false);
  const Centered c = center(deltas);
  TheoryResult result;
  result.mse = sy2 * sy2 / static_cast<double>(sizes.n) * (c.y + auxiliary_bracket(kind, c, weight));
  result.valid = result.mse >= 0.0;
  if (kind == Estimator::Unbiased) {
    result.formula_id = "unbiased.variance:published";
    result.bias = 0.0;
  } else {
    result.formula_id = single_phase_id(kind, "mse");
    if (kind != Estimator::IsakiRatio) result.bias = bias_single_phase(kind, deltas, sy2, sizes, weight);
  }
  return result;
}

double bias_single_phase(Estimator kind, const DeltaTable& deltas, double sy2,
                         const DesignSizes& sizes, std::optional<double> weight) {
  check_inputs(deltas, sy2);
  check_sizes(sizes, false);
  const Centered c = center(deltas);
  const double ratio = 3.0 / 8.0 * c.x - 0.5 * c.yx;
  const double product = -1.0 / 8.0 * c.z + 0.5 * c.yz;
  double bracket = 0.0;
  switch (kind) {
    case Estimator::Unbiased:
      bracket = 0.0;
      break;
    case Estimator::ExpRatio:
      bracket = ratio;
      break;
    case Estimator::ExpProduct:
      bracket = product;
      break;
    case Estimator::Combined: {
      const double a = require_weight(kind, weight);
      bracket = a * ratio + (1.0 - a) * product;
      break;
    }
    default:
      throw InvalidInputError("no bias expression for " + std::string(name_of(kind)));
  }
  return sy2 / static_cast<double>(sizes.n) * bracket;
}

double mse_two_phase_rates(Estimator kind, const DeltaTable& deltas, double sy2, double inv_n,
                           double inv_nprime, std::optional<double> weight) {
  if (kind != Estimator::Unbiased && !is_two_phase(kind)) {
    throw InvalidInputError(std::string(name_of(kind)) + " is not a two-phase estimator");
  }
  check_inputs(deltas, sy2);
  const Centered c = center(deltas);
  const double theta = inv_n - inv_nprime;
  return sy2 * sy2 * (c.y * inv_n + theta * auxiliary_bracket(kind, c, weight));
}

TheoryResult mse_two_phase(Estimator kind, const DeltaTable& deltas, double sy2,
                           const DesignSizes& sizes, std::optional<double> weight) {
  check_sizes(sizes, true);
  TheoryResult result;
  result.mse = mse_two_phase_rates(kind, deltas, sy2, 1.0 / static_cast<double>(sizes.n),
                                   1.0 / static_cast<double>(*sizes.nprime), weight);
  result.valid = result.mse >= 0.0;
  result.formula_id = two_phase_id(kind);
  if (kind == Estimator::Unbiased) result.bias = 0.0;
  return result;
}

double pre(double mse_candidate, double mse_baseline) {
  if (!(mse_candidate > 0.0) || !(mse_baseline > 0.0)) {
    throw InvalidInputError("PRE needs strictly positive MSEs");
  }
  return 100.0 * mse_baseline / mse_candidate;
}

OptimalCombination min_mse_combined(const DeltaTable& deltas, double sy2,
                                    const DesignSizes& sizes) {
  if (sizes.nprime) {
    const double k = k_opt(deltas);
    return {k, mse_two_phase(Estimator::CombinedTwoPhase, deltas, sy2, sizes, k).mse};
  }
  const double a = alpha_opt(deltas);
  return {a, mse_single_phase(Estimator::Combined, deltas, sy2, sizes, a).mse};
}

DeltaTable reference_deltas() noexcept {
  DeltaTable t;
  t.d400 = 2.2667;
  t.d040 = 3.65;
  t.d004 = 2.8664;
  t.d220 = 2.3377;
  t.d202 = 2.2208;
  t.d022 = 3.14;
  return t;
}

const std::vector<FormulaCorrection>& formula_corrections() {
  static const std::vector<FormulaCorrection> kLedger{
      {"isaki.estimator", "s_y^2 S_x^2 / S_x^2", "s_y^2 S_x^2 / s_x^2",
       "the published MSE (S_y^4/n)[d400 + d040 - 2 d220] is that of the ratio form"},
      {"exp-product.estimator", "s_y^2 exp[(S_z^2 - s_z^2)/(S_z^2 + s_z^2)]",
       "s_y^2 exp[(s_z^2 - S_z^2)/(s_z^2 + S_z^2)]",
       "the +(d202 - 1) term of its published MSE and the z-term of the combined estimator need "
       "the product orientation; reproduces PRE 42.9"},
      {"exp-ratio.bias", "(S_y^2/n)[d040/8 - d220/2 + 3/8]",
       "(S_y^2/n)[(3/8)(d040 - 1) - (1/2)(d220 - 1)]",
       "second-order expansion of exp[-e/2 (1 + e/2)^-1]; Monte Carlo bias sign"},
      {"exp-ratio.mse", "(S_y^2/n)[d400 + d040/4 - d220 + 1/4]",
       "(S_y^4/n)[d400 + d040/4 - d220 - 1/4]",
       "published constant gives PRE ~116 on the reference moments instead of the tabulated "
       "214.35; corrected gives 214.1"},
      {"exp-product.bias", "(S_y^2/n)[d004/8 + d202/2 - 5/8]",
       "(S_y^2/n)[-(1/8)(d004 - 1) + (1/2)(d202 - 1)]",
       "second-order expansion of the product factor; weight-0 collapse of the combined bias"},
      {"combined.estimator", "z exponent denominator s_x^2 + S_z^2", "s_z^2 + S_z^2",
       "weight 0 must reduce to the exponential product estimator"},
      {"combined.bias", "alpha/8 (d040 - 1) + (1 - alpha)/8 (d004 - 1) + ...",
       "3 alpha/8 (d040 - 1) - (1 - alpha)/8 (d004 - 1) + ...",
       "weights 1 and 0 must reduce to the exp-ratio and exp-product biases"},
      {"combined.mse", "(1 - alpha^2)/4 (d004 - 1)", "(1 - alpha)^2/4 (d004 - 1)",
       "the published optimal weight minimizes only the corrected quadratic; weight 0 reduces to "
       "the exp-product MSE"},
      {"exp-product-2p.estimator", "s_z^2 exp[(s_z'^2 - s_z^2)/(s_z'^2 + s_z^2)]",
       "s_y^2 exp[(s_z^2 - s_z'^2)/(s_z^2 + s_z'^2)]",
       "its published MSE has the +(d202 - 1) product term and an S_y^4 scale; Monte Carlo"},
      {"combined-2p.estimator", "z exponent (s_z'^2 - s_z^2)/(s_z'^2 + s_z^2)",
       "(s_z^2 - s_z'^2)/(s_z^2 + s_z'^2)",
       "weight 0 must reduce to the two-phase product estimator"},
      {"combined-2p.mse",
       "+k theta (d220 - 1), (k^2 - 1)/4 theta (d004 - 1), (k - 1)(-theta)(d202 - 1)",
       "-k theta (d220 - 1), (1 - k)^2/4 theta (d004 - 1), (1 - k) theta (d202 - 1)",
       "k = 1 and k = 0 must reproduce the two-phase exp-ratio and exp-product MSEs"},
      {"combined-2p.optimal-weight", "{d004 + 2(d220 - 1) + d022 - 6} / (...)",
       "{d004 + 2(d220 + d202) + d022 - 6} / (d040 + d004 + 2 d022 - 4)",
       "stationary point of the corrected two-phase MSE; equals the single-phase optimum"},
  };
  return kLedger;
}

}  // namespace varest
