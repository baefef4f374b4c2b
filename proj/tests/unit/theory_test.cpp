#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "varest/error.hpp"
#include "varest/reference.hpp"
#include "varest/theory.hpp"

namespace varest {
namespace {

const DesignSizes kTen{10, std::nullopt};
const DesignSizes kTenOf25{10, 25};

TEST(VarUnbiased, Examples) {
  DeltaTable two_point;
  EXPECT_DOUBLE_EQ(var_unbiased_theory(two_point, 3.0, kTen), 0.0);
  EXPECT_NEAR(var_unbiased_theory(reference_deltas(), 1.0, kTen), 0.12667, 1e-12);
  const DeltaTable d = reference_deltas();
  EXPECT_DOUBLE_EQ(var_unbiased_theory(d, 2.5, {40, std::nullopt}),
                   var_unbiased_theory(d, 2.5, {20, std::nullopt}) / 2.0);
  EXPECT_THROW((void)var_unbiased_theory(d, 0.0, kTen), InvalidInputError);
  EXPECT_THROW((void)var_unbiased_theory(d, 1.0, {1, std::nullopt}), InvalidInputError);
}

TEST(MseSinglePhase, ReferenceValues) {
  const DeltaTable d = reference_deltas();
  EXPECT_NEAR(mse_single_phase(Estimator::ExpRatio, d, 1.0, kTen).mse, 0.05915, 1e-12);
  EXPECT_NEAR(mse_single_phase(Estimator::ExpProduct, d, 1.0, kTen).mse, 0.29541, 1e-12);
  // Bracket (d400 - 1) + (d040 - 1) - 2 (d220 - 1) = 1.2413.
  EXPECT_NEAR(mse_single_phase(Estimator::IsakiRatio, d, 1.0, kTen).mse, 0.12413, 1e-12);
  const TheoryResult r = mse_single_phase(Estimator::ExpRatio, d, 1.0, kTen);
  EXPECT_EQ(r.formula_id, "exp-ratio.mse:corrected");
  EXPECT_TRUE(r.valid);
  ASSERT_TRUE(r.bias.has_value());
  EXPECT_NEAR(*r.bias, 0.03249, 1e-12);
  EXPECT_FALSE(mse_single_phase(Estimator::IsakiRatio, d, 1.0, kTen).bias.has_value());
  EXPECT_THROW((void)mse_single_phase(Estimator::Combined, d, 1.0, kTen), InvalidInputError);
  EXPECT_THROW((void)mse_single_phase(Estimator::ExpRatioTwoPhase, d, 1.0, kTen),
               InvalidInputError);
}

TEST(MseSinglePhase, NegativeMseIsFlaggedNotClamped) {
  DeltaTable bad;
  bad.d040 = 2.0;
  bad.d220 = 4.0;  // violates the correlation bound
  const TheoryResult r = mse_single_phase(Estimator::ExpRatio, bad, 1.0, kTen);
  EXPECT_LT(r.mse, 0.0);
  EXPECT_FALSE(r.valid);
}

TEST(BiasSinglePhase, Examples) {
  DeltaTable ones;
  EXPECT_DOUBLE_EQ(bias_single_phase(Estimator::ExpRatio, ones, 1.0, kTen), 0.0);
  const DeltaTable d = reference_deltas();
  EXPECT_NEAR(bias_single_phase(Estimator::ExpRatio, d, 1.0, kTen), 0.03249, 1e-12);
  // -(1/8)(1.8664) + (1/2)(1.2208), over 10.
  EXPECT_NEAR(bias_single_phase(Estimator::ExpProduct, d, 1.0, kTen), 0.03771, 1e-12);
  EXPECT_DOUBLE_EQ(bias_single_phase(Estimator::Combined, d, 1.0, kTen, 0.0),
                   bias_single_phase(Estimator::ExpProduct, d, 1.0, kTen));
  EXPECT_DOUBLE_EQ(bias_single_phase(Estimator::Combined, d, 1.0, kTen, 1.0),
                   bias_single_phase(Estimator::ExpRatio, d, 1.0, kTen));
  EXPECT_THROW((void)bias_single_phase(Estimator::IsakiRatio, d, 1.0, kTen), InvalidInputError);
}

TEST(MseTwoPhase, ReferenceValues) {
  const DeltaTable d = reference_deltas();
  EXPECT_NEAR(mse_two_phase(Estimator::ExpRatioTwoPhase, d, 1.0, kTenOf25).mse, 0.086158, 1e-12);
  EXPECT_NEAR(mse_two_phase(Estimator::ExpProductTwoPhase, d, 1.0, kTenOf25).mse, 0.227914,
              1e-12);
  EXPECT_THROW((void)mse_two_phase(Estimator::ExpRatioTwoPhase, d, 1.0, kTen), InvalidDesignError);
  EXPECT_THROW((void)mse_two_phase(Estimator::ExpRatioTwoPhase, d, 1.0, {10, 10}),
               InvalidDesignError);
  EXPECT_THROW((void)mse_two_phase(Estimator::ExpRatio, d, 1.0, kTenOf25), InvalidInputError);
  EXPECT_EQ(mse_two_phase(Estimator::CombinedTwoPhase, d, 1.0, kTenOf25, 0.5).formula_id,
            "combined-2p.mse:corrected");
}

TEST(MseTwoPhase, EqualPhasesDegenerateToUnbiased) {
  const DeltaTable d = reference_deltas();
  for (double k : {-0.3, 0.5, 1.2}) {
    EXPECT_DOUBLE_EQ(mse_two_phase_rates(Estimator::CombinedTwoPhase, d, 1.7, 0.1, 0.1, k),
                     var_unbiased_theory(d, 1.7, kTen));
  }
}

TEST(Pre, Examples) {
  EXPECT_DOUBLE_EQ(pre(3.2, 3.2), 100.0);
  const DeltaTable d = reference_deltas();
  const double base = var_unbiased_theory(d, 1.0, kTen);
  EXPECT_NEAR(pre(mse_single_phase(Estimator::ExpRatio, d, 1.0, kTen).mse, base), 214.1, 0.5);
  EXPECT_NEAR(pre(mse_single_phase(Estimator::ExpProduct, d, 1.0, kTen).mse, base), 42.88, 0.1);
  EXPECT_THROW((void)pre(0.0, 1.0), InvalidInputError);
  EXPECT_THROW((void)pre(1.0, -1.0), InvalidInputError);
}

TEST(MinMseCombined, ReferenceValues) {
  const DeltaTable d = reference_deltas();
  const OptimalCombination single = min_mse_combined(d, 1.0, kTen);
  EXPECT_NEAR(single.weight, 1.03718, 1e-5);
  // Brute-force minimisation over a 1e-6 weight grid gives 0.05884610.
  EXPECT_NEAR(single.mse, 0.0588461, 1e-7);
  const OptimalCombination two = min_mse_combined(d, 1.0, kTenOf25);
  EXPECT_NEAR(two.weight, 1.03718, 1e-5);
  EXPECT_NEAR(two.mse, 0.0859757, 1e-7);
}

TEST(MinMseCombined, HalfWeightByConstruction) {
  // Numerator 4, denominator 8.
  DeltaTable t;
  t.d040 = 5;
  t.d004 = 3;
  t.d220 = 1.5;
  t.d202 = 1.0;
  t.d022 = 2;
  EXPECT_DOUBLE_EQ(min_mse_combined(t, 1.0, kTen).weight, 0.5);
}

// Identities and properties over random valid moment tables.

TEST(TheoryProperties, ReductionIdentities) {
  std::mt19937_64 gen(2024);
  for (int i = 0; i < 200; ++i) {
    const DeltaTable t = testing::random_valid_delta_table(gen);
    const double sy2 = 0.5 + i * 0.01;
    const auto close = [](double a, double b) {
      return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
    };
    const auto single = [&](Estimator e, std::optional<double> w = std::nullopt) {
      return mse_single_phase(e, t, sy2, kTen, w).mse;
    };
    const auto two = [&](Estimator e, std::optional<double> w = std::nullopt) {
      return mse_two_phase(e, t, sy2, kTenOf25, w).mse;
    };
    EXPECT_TRUE(close(single(Estimator::Combined, 1.0), single(Estimator::ExpRatio)));
    EXPECT_TRUE(close(single(Estimator::Combined, 0.0), single(Estimator::ExpProduct)));
    EXPECT_TRUE(close(two(Estimator::CombinedTwoPhase, 1.0), two(Estimator::ExpRatioTwoPhase)));
    EXPECT_TRUE(close(two(Estimator::CombinedTwoPhase, 0.0), two(Estimator::ExpProductTwoPhase)));
    for (double k : {-0.7, 0.25, 1.4}) {
      EXPECT_TRUE(close(mse_two_phase_rates(Estimator::CombinedTwoPhase, t, sy2, 0.1, 0.0, k),
                        single(Estimator::Combined, k)));
    }
    EXPECT_TRUE(close(mse_two_phase_rates(Estimator::ExpRatioTwoPhase, t, sy2, 0.1, 0.0),
                      single(Estimator::ExpRatio)));
  }
}

TEST(TheoryProperties, ValidTablesGiveNonNegativeMse) {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 500; ++i) {
    const DeltaTable t = testing::random_valid_delta_table(gen);
    for (Estimator e : {Estimator::Unbiased, Estimator::IsakiRatio, Estimator::ExpRatio,
                        Estimator::ExpProduct}) {
      EXPECT_TRUE(mse_single_phase(e, t, 1.0, kTen).valid);
    }
    EXPECT_TRUE(mse_two_phase(Estimator::CombinedTwoPhase, t, 1.0, kTenOf25, 0.3).valid);
  }
}

TEST(TheoryProperties, QuadraticShapeInWeight) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 100; ++i) {
    const DeltaTable t = testing::random_valid_delta_table(gen);
    const double sy2 = 1.3;
    const double h = 1.0;
    const auto f = [&](double a) { return mse_single_phase(Estimator::Combined, t, sy2, kTen, a).mse; };
    const double expected =
        sy2 * sy2 / 10.0 * (t.d040 + t.d004 + 2.0 * t.d022 - 4.0) / 2.0;
    for (double a : {-0.5, 0.2, 1.1}) {
      const double second = (f(a + h) - 2.0 * f(a) + f(a - h)) / (h * h);
      EXPECT_NEAR(second, expected, 1e-10 * std::max(1.0, f(a)));
    }
  }
}

TEST(TheoryProperties, PreAntisymmetry) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(1e-3, 1e3);
  for (int i = 0; i < 100; ++i) {
    const double a = u(gen), b = u(gen);
    EXPECT_NEAR(pre(a, b) * pre(b, a), 10000.0, 1e-6 * 10000.0);
  }
}

TEST(FormulaCorrections, LedgerIsWellFormed) {
  std::set<std::string> ids;
  for (const auto& c : formula_corrections()) {
    EXPECT_FALSE(c.published.empty());
    EXPECT_FALSE(c.corrected.empty());
    EXPECT_FALSE(c.check.empty());
    EXPECT_TRUE(ids.insert(c.formula_id).second) << c.formula_id;
  }
  EXPECT_TRUE(ids.count("exp-ratio.mse"));
  EXPECT_TRUE(ids.count("combined-2p.mse"));
}

TEST(ReferenceTables, SinglePhaseReproducedTwoPhaseFlagged) {
  for (const ReferenceCell& c : reproduce_reference_tables()) {
    if (c.table == "single-phase" || c.estimator == "unbiased") {
      EXPECT_TRUE(c.consistent) << c.table << " " << c.estimator;
    } else {
      EXPECT_FALSE(c.consistent) << c.estimator;
    }
  }
}

}  // namespace
}  // namespace varest
