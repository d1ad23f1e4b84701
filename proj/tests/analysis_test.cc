//
// Copyright 2026 The Divnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Reference values marked "mpmath" were computed with 50-digit arithmetic in
// an independent Python implementation of the formulas and frozen here.

#include "divnoise/analysis.h"

#include <cmath>
#include <cstdint>

#include <gtest/gtest.h>

#include "divnoise/distributions.h"
#include "divnoise/errors.h"
#include "divnoise/rational.h"

namespace divnoise {
namespace {

// mpmath: hyp2f1(1, 1, 2, 1/2) = 2 ln 2
constexpr double kHyp2f1Log = 1.3862943611198906188;
// mpmath: tanh(1)
constexpr double kTanh1 = 0.76159415595576488812;
// mpmath: GDL(1/2, 1) pmf at k = 0..3
constexpr double kGdlHalfPmf0 = 0.65530655677389729803;
constexpr double kGdlHalfPmf1 = 0.12272726301102851648;
constexpr double kGdlHalfPmf2 = 0.03406856496362792708;
constexpr double kGdlHalfPmf3 = 0.010476510755493856972;
// mpmath: GDL(2/5, 1/2) pmf at k = 0, 1, 5
constexpr double kGdlSmallPmf0 = 0.50873261877857484855;
constexpr double kGdlSmallPmf1 = 0.13017813144479577935;
constexpr double kGdlSmallPmf5 = 0.0076671385105201476759;
// mpmath: exact / simplified / Wendel epsilon for (beta, a, delta)
constexpr double kEpsExactA = 2.9567280412026292026;   // (1/2, 1, 2)
constexpr double kEpsSimplA = 3.3862943611198906188;
constexpr double kEpsWendelA = 3.0305103088617776197;
constexpr double kEpsExactB = 2.5721943651298441809;   // (3/10, 1/2, 2)
constexpr double kEpsSimplB = 2.897119984885881302;
constexpr double kEpsWendelB = 2.6788343808726483264;
constexpr double kEpsExactC = 10.348847932188279439;   // (1/4, 2, 4)
constexpr double kEpsSimplC = 10.772588722239781238;
constexpr double kEpsWendelC = 10.373211761900321553;
// mpmath: calibrated beta and variance for (delta, eps)
constexpr double kCalBeta14 = 0.13533528323661269189;    // (1, 4)
constexpr double kCalVar14 = 0.048995544983823929568;
constexpr double kCalBeta46 = 0.073262555554936721175;   // (4, 6)
constexpr double kCalVar46 = 0.57404114779046456841;
constexpr double kCalBeta168 = 0.039660034826661734769;  // (16, 8)
constexpr double kCalVar168 = 5.0698796128751168303;
// mpmath: variances
constexpr double kDLapVar1 = 1.8413471884155846379;
constexpr double kDLapVar2 = 0.3620308304831552332;
constexpr double kMsdLapVar23 = 5.0684316267641732649;
constexpr double kMerchantVar = 1.0011593543279828368;
// mpmath: MSDLap(2, 3) pmf at 0
constexpr double kMsdLap23Pmf0 = 0.44677032144826971861;
// mpmath: staircase variances for (r, eps, delta)
constexpr double kStairVar134 = 2.7982742196024933514;
constexpr double kStairVar234 = 2.5333396290199376457;
constexpr double kStairVar454 = 4.2147029792908687997;
// mpmath: best-hole-variance / best-staircase-variance at delta=3, eps=20,
// divided by the correction factor (1+(2D-1)e^-eps)/(1-e^-eps)^2
constexpr double kMsdStairRatio = 0.99999999072480874955;

TEST(SpecialFunctionsTest, LnGammaMatchesReference) {
  for (const double x : {0.1, 0.5, 1.0, 1.5, 7.3, 40.0, 171.0}) {
    EXPECT_NEAR(LnGamma(x), std::lgamma(x), 1e-12 * (1.0 + std::abs(std::lgamma(x))))
        << "x = " << x;
  }
}

TEST(SpecialFunctionsTest, PochhammerProducts) {
  EXPECT_DOUBLE_EQ(Pochhammer(3.0, 4), 360.0);  // 3*4*5*6
  EXPECT_DOUBLE_EQ(Pochhammer(0.5, 2), 0.75);
  EXPECT_DOUBLE_EQ(Pochhammer(2.5, 0), 1.0);
  // Large n goes through the LnGamma ratio path.
  EXPECT_NEAR(Pochhammer(1.5, 100),
              std::exp(std::lgamma(101.5) - std::lgamma(1.5)),
              1e-9 * std::exp(std::lgamma(101.5) - std::lgamma(1.5)));
}

TEST(SpecialFunctionsTest, Hyp2f1LogIdentity) {
  // F(1, 1; 2; z) = -ln(1-z)/z; at z = 1/2 this is 2 ln 2.
  EXPECT_NEAR(Hyp2f1(1.0, 1.0, 2.0, 0.5), kHyp2f1Log, 1e-14 * kHyp2f1Log);
}

TEST(SpecialFunctionsTest, Hyp2f1EulerTransformation) {
  // F(a, b; c; z) = (1-z)^(c-a-b) F(c-a, c-b; c; z), all parameters inside
  // the supported positive range.
  const double a = 0.5;
  const double b = 0.7;
  const double c = 2.0;
  const double z = 0.3;
  const double lhs = Hyp2f1(a, b, c, z);
  const double rhs =
      std::pow(1.0 - z, c - a - b) * Hyp2f1(c - a, c - b, c, z);
  EXPECT_NEAR(lhs, rhs, 1e-12 * lhs);
}

TEST(SpecialFunctionsTest, LogHyp2f1ConsistentWithLinear) {
  const double value = Hyp2f1(0.5, 2.5, 1.0, 0.5);
  EXPECT_NEAR(LogHyp2f1(0.5, 2.5, 1.0, 0.5), std::log(value),
              1e-12 * std::abs(std::log(value)));
}

TEST(SpecialFunctionsTest, Hyp2f1AtZeroIsOne) {
  EXPECT_DOUBLE_EQ(Hyp2f1(0.3, 0.8, 1.2, 0.0), 1.0);
}

TEST(NbPmfTest, GeometricSpecialCase) {
  // NB(1, p) is Geometric(p) on {0, 1, ...}.
  const double p = 0.3;
  for (std::int64_t k = 0; k <= 10; ++k) {
    EXPECT_NEAR(NbPmf(1.0, p, k), p * std::pow(1.0 - p, k), 1e-15);
  }
  EXPECT_EQ(NbPmf(1.0, p, -1), 0.0);
}

TEST(NbPmfTest, SumsToOne) {
  double total = 0.0;
  for (std::int64_t k = 0; k <= 500; ++k) {
    total += NbPmf(3.5, 0.4, k);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(DLapPmfTest, ClosedForm) {
  EXPECT_NEAR(DLapPmf(2.0, 0), kTanh1, 1e-15);
  for (std::int64_t k = -5; k <= 5; ++k) {
    EXPECT_NEAR(DLapPmf(1.0, k),
                std::tanh(0.5) * std::exp(-std::abs(static_cast<double>(k))),
                1e-15);
  }
}

TEST(GdlPmfTest, FrozenValues) {
  EXPECT_NEAR(GdlPmf(0.5, 1.0, 0), kGdlHalfPmf0, 1e-12 * kGdlHalfPmf0);
  EXPECT_NEAR(GdlPmf(0.5, 1.0, 1), kGdlHalfPmf1, 1e-12 * kGdlHalfPmf1);
  EXPECT_NEAR(GdlPmf(0.5, 1.0, 2), kGdlHalfPmf2, 1e-12 * kGdlHalfPmf2);
  EXPECT_NEAR(GdlPmf(0.5, 1.0, 3), kGdlHalfPmf3, 1e-12 * kGdlHalfPmf3);
  EXPECT_NEAR(GdlPmf(0.4, 0.5, 0), kGdlSmallPmf0, 1e-12 * kGdlSmallPmf0);
  EXPECT_NEAR(GdlPmf(0.4, 0.5, 1), kGdlSmallPmf1, 1e-12 * kGdlSmallPmf1);
  EXPECT_NEAR(GdlPmf(0.4, 0.5, 5), kGdlSmallPmf5, 1e-12 * kGdlSmallPmf5);
}

TEST(GdlPmfTest, SymmetricAndRecoversDLap) {
  for (std::int64_t k = 0; k <= 10; ++k) {
    EXPECT_DOUBLE_EQ(GdlPmf(0.5, 1.0, k), GdlPmf(0.5, 1.0, -k));
    EXPECT_NEAR(GdlPmf(1.0, 1.0, k), DLapPmf(1.0, k), 1e-12);
  }
}

TEST(PmfTableTest, DLapTableMatchesPointPmf) {
  const PmfTable table = BuildPmfTable(DLapParams{Rational(1)});
  EXPECT_LE(table.tail_bound, 1e-14);
  EXPECT_EQ(table.max_value(), -table.min_value);
  double total = 0.0;
  for (std::int64_t k = table.min_value; k <= table.max_value(); ++k) {
    EXPECT_NEAR(table.At(k), DLapPmf(1.0, k), 1e-15);
    total += table.At(k);
  }
  EXPECT_NEAR(total, 1.0, 1e-13);
  EXPECT_EQ(table.At(table.max_value() + 1), 0.0);
}

TEST(PmfTableTest, MsdLapTableMomentsAndMass) {
  const MsdLapParams params = MsdLapParams::Contiguous(Rational(2), 3);
  const PmfTable table = BuildMsdLapPmfTable(params);
  EXPECT_NEAR(table.At(0), kMsdLap23Pmf0, 1e-12 * kMsdLap23Pmf0);
  double total = 0.0;
  double second = 0.0;
  for (std::int64_t k = table.min_value; k <= table.max_value(); ++k) {
    total += table.At(k);
    second += static_cast<double>(k) * static_cast<double>(k) * table.At(k);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(second, MsdLapVariance(params), 1e-10 * MsdLapVariance(params));
}

TEST(PmfTest, DispatchesAcrossFamilies) {
  EXPECT_NEAR(Pmf(DLapParams{Rational(1)}, 2), DLapPmf(1.0, 2), 1e-15);
  EXPECT_NEAR(Pmf(GdlParams(Rational(1, 2), Rational(1)), 1), kGdlHalfPmf1,
              1e-12 * kGdlHalfPmf1);
  EXPECT_NEAR(Pmf(NbParams(Rational(1), TrialProb::Ratio(Rational(3, 10))), 2),
              NbPmf(1.0, 0.3, 2), 1e-15);
  EXPECT_NEAR(Pmf(MsdLapParams::Contiguous(Rational(2), 3), 0), kMsdLap23Pmf0,
              1e-12 * kMsdLap23Pmf0);
}

TEST(GdlEpsilonTest, FrozenTriples) {
  const PrivacyBound a = GdlEpsilon(0.5, 1.0, 2);
  EXPECT_EQ(a.method, PrivacyMethod::kExactHypergeometric);
  ASSERT_TRUE(a.eps_exact.has_value());
  EXPECT_NEAR(*a.eps_exact, kEpsExactA, 1e-12 * kEpsExactA);
  EXPECT_NEAR(a.eps_simplified, kEpsSimplA, 1e-12 * kEpsSimplA);
  EXPECT_NEAR(a.eps_wendel, kEpsWendelA, 1e-12 * kEpsWendelA);
  EXPECT_DOUBLE_EQ(a.eps, *a.eps_exact);

  const PrivacyBound b = GdlEpsilon(0.3, 0.5, 2);
  EXPECT_NEAR(*b.eps_exact, kEpsExactB, 1e-12 * kEpsExactB);
  EXPECT_NEAR(b.eps_simplified, kEpsSimplB, 1e-12 * kEpsSimplB);
  EXPECT_NEAR(b.eps_wendel, kEpsWendelB, 1e-12 * kEpsWendelB);

  const PrivacyBound c = GdlEpsilon(0.25, 2.0, 4);
  EXPECT_NEAR(*c.eps_exact, kEpsExactC, 1e-12 * kEpsExactC);
  EXPECT_NEAR(c.eps_simplified, kEpsSimplC, 1e-12 * kEpsSimplC);
  EXPECT_NEAR(c.eps_wendel, kEpsWendelC, 1e-12 * kEpsWendelC);
}

TEST(GdlEpsilonTest, LargeBetaFallsBackToPostprocessing) {
  const PrivacyBound bound = GdlEpsilon(1.5, 0.7, 3);
  EXPECT_EQ(bound.method, PrivacyMethod::kPostprocessingDLap);
  EXPECT_FALSE(bound.eps_exact.has_value());
  EXPECT_DOUBLE_EQ(bound.eps, 0.7 * 3);
}

TEST(GdlEpsilonTest, ExactNeverExceedsUpperBounds) {
  for (const double beta : {0.1, 0.4, 0.9}) {
    for (const double a : {0.3, 1.0, 2.5}) {
      for (const std::uint64_t delta : {1, 3, 6}) {
        const PrivacyBound bound = GdlEpsilon(beta, a, delta);
        EXPECT_LE(bound.eps, bound.eps_simplified + 1e-12);
        EXPECT_LE(bound.eps, bound.eps_wendel + 1e-12);
        EXPECT_GE(bound.eps, a * static_cast<double>(delta) - 1e-12);
      }
    }
  }
}

TEST(GdlEpsilonTest, ParamsOverloadAgrees) {
  const PrivacyBound from_params =
      GdlEpsilon(GdlParams(Rational(1, 2), Rational(1)), 2);
  EXPECT_NEAR(from_params.eps, kEpsExactA, 1e-12 * kEpsExactA);
}

TEST(MsdLapEpsilonTest, BudgetAccounting) {
  EXPECT_DOUBLE_EQ(MsdLapEpsilon(MsdLapParams::Contiguous(Rational(2), 3)),
                   2.0);
  EXPECT_DOUBLE_EQ(MsdLapEpsilon(MsdLapParams::Contiguous(Rational(3), 4, 1)),
                   3.0);
  EXPECT_DOUBLE_EQ(
      MsdLapEpsilon(MsdLapParams::FromScales(Rational(10), {5, 10, 30, 100})),
      10.0);
}

TEST(CalibrationTest, FrozenParametersAndVariance) {
  const GdlParams p14 = CalibrateGdl(4.0, 1);
  EXPECT_NEAR(p14.beta.ToDouble(), kCalBeta14, 1e-15);
  EXPECT_EQ(p14.a, Rational(2));
  EXPECT_NEAR(CalibratedGdlVariance(4.0, 1), kCalVar14, 1e-12 * kCalVar14);

  const GdlParams p46 = CalibrateGdl(6.0, 4);
  EXPECT_NEAR(p46.beta.ToDouble(), kCalBeta46, 1e-15);
  EXPECT_EQ(p46.a, Rational(1, 2));
  EXPECT_NEAR(CalibratedGdlVariance(6.0, 4), kCalVar46, 1e-12 * kCalVar46);

  EXPECT_NEAR(CalibrateGdl(8.0, 16).beta.ToDouble(), kCalBeta168, 1e-15);
  EXPECT_NEAR(CalibratedGdlVariance(8.0, 16), kCalVar168, 1e-12 * kCalVar168);
}

TEST(CalibrationTest, SimplifiedBoundHitsBudgetExactly) {
  const struct {
    std::uint64_t delta;
    double eps;
  } cases[] = {{1, 4.0}, {4, 6.0}, {16, 8.0}};
  for (const auto& c : cases) {
    const GdlParams params = CalibrateGdl(c.eps, c.delta);
    const PrivacyBound bound = GdlEpsilon(params, c.delta);
    EXPECT_NEAR(bound.eps_simplified, c.eps, 1e-12)
        << "delta = " << c.delta;
    // The exact accountant certifies strictly less than the budget.
    EXPECT_LT(bound.eps, c.eps);
  }
}

TEST(CalibrationTest, RejectsOutOfRangeBudget) {
  // Requires eps > 2 + ln(delta): 3 < 2 + ln 4.
  EXPECT_THROW(CalibrateGdl(3.0, 4), PreconditionError);
  EXPECT_THROW(CalibratedGdlVariance(2.0, 1), PreconditionError);
}

TEST(ChooseHoleRTest, FrozenChoiceAndPreconditions) {
  EXPECT_EQ(ChooseHoleR(6.0, 10000), 1354u);
  // Small delta: the plain mechanism wins.
  EXPECT_EQ(ChooseHoleR(2.0, 3), 0u);
  EXPECT_THROW(ChooseHoleR(1.5, 10), PreconditionError);
}

TEST(ChooseHoleRTest, ChoiceIsNoWorseThanEitherCandidate) {
  for (const double eps : {2.0, 4.0, 6.0}) {
    for (const std::uint64_t delta : {10, 100, 1000}) {
      const std::uint64_t r = ChooseHoleR(eps, delta);
      const Rational eps_rational = Rational::FromDouble(eps);
      const double chosen = MsdLapVariance(
          MsdLapParams::Contiguous(eps_rational, delta, r));
      const double plain =
          MsdLapVariance(MsdLapParams::Contiguous(eps_rational, delta, 0));
      EXPECT_LE(chosen, plain + 1e-12 * plain);
    }
  }
}

TEST(ContinuousCalibrationTest, DerivedParameters) {
  const ContinuousParams params = CalibrateContinuous(Rational(6), 1.0);
  EXPECT_EQ(params.delta_d, 8u);  // ceil(e^2)
  EXPECT_DOUBLE_EQ(params.hole_width, 0.125);
  const double inner_var = MsdLapVariance(params.Inner());
  const double r = params.hole_width;
  EXPECT_NEAR(params.variance, r * r * inner_var + r * r / 2.0,
              1e-12 * params.variance);
  // Sensitivity scales the noise linearly, the variance quadratically.
  const ContinuousParams scaled = CalibrateContinuous(Rational(6), 3.0);
  EXPECT_NEAR(scaled.variance, 9.0 * params.variance,
              1e-12 * scaled.variance);
}

TEST(ContinuousCalibrationTest, RejectsSmallBudget) {
  EXPECT_THROW(CalibrateContinuous(Rational(3, 2), 1.0), PreconditionError);
  EXPECT_THROW(CalibrateContinuous(Rational(6), 0.0), PreconditionError);
}

TEST(VarianceTest, FrozenClosedForms) {
  EXPECT_NEAR(DLapVariance(1.0), kDLapVar1, 1e-12 * kDLapVar1);
  EXPECT_NEAR(DLapVariance(2.0), kDLapVar2, 1e-12 * kDLapVar2);
  EXPECT_NEAR(MsdLapVariance(MsdLapParams::Contiguous(Rational(2), 3)),
              kMsdLapVar23, 1e-12 * kMsdLapVar23);
  EXPECT_NEAR(
      MsdLapVariance(MsdLapParams::FromScales(Rational(10), {5, 10, 30, 100})),
      kMerchantVar, 1e-12 * kMerchantVar);
  EXPECT_DOUBLE_EQ(GdlVariance(1.0, 1.0), DLapVariance(1.0));
  EXPECT_DOUBLE_EQ(NbVariance(2.5, 0.25), 2.5 * 0.75 / 0.0625);
}

TEST(VarianceTest, SmoothedCombinesScaledInnerAndHole) {
  const MsdLapParams smoothed = MsdLapParams::Contiguous(Rational(3), 4, 1);
  // hole_r = 1 leaves no gaps to stretch: inner mechanism at eps - 1 over
  // {1..4} plus a DLap(1).
  const double inner =
      MsdLapVariance(MsdLapParams::Contiguous(Rational(2), 4));
  EXPECT_NEAR(MsdLapVariance(smoothed), inner + DLapVariance(1.0),
              1e-12 * MsdLapVariance(smoothed));
}

TEST(VarianceTest, VariantDispatch) {
  EXPECT_DOUBLE_EQ(Variance(DLapParams{Rational(2)}), DLapVariance(2.0));
  EXPECT_DOUBLE_EQ(Variance(GdlParams(Rational(1, 2), Rational(1))),
                   GdlVariance(0.5, 1.0));
  EXPECT_DOUBLE_EQ(
      Variance(NbParams(Rational(5, 2), TrialProb::Ratio(Rational(1, 4)))),
      NbVariance(2.5, 0.25));
  EXPECT_DOUBLE_EQ(Variance(MsdLapParams::Contiguous(Rational(2), 3)),
                   kMsdLapVar23);
}

TEST(StaircaseTest, FrozenVariances) {
  EXPECT_NEAR(StaircaseVariance({1, 3.0, 4}), kStairVar134,
              1e-12 * kStairVar134);
  EXPECT_NEAR(StaircaseVariance({2, 3.0, 4}), kStairVar234,
              1e-12 * kStairVar234);
  EXPECT_NEAR(StaircaseVariance({4, 5.0, 4}), kStairVar454,
              1e-12 * kStairVar454);
}

TEST(StaircaseTest, PmfNormalizes) {
  const StaircaseParams params{2, 3.0, 4};
  double total = 0.0;
  for (std::int64_t i = -200; i <= 200; ++i) {
    total += StaircasePmf(params, i);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(StaircaseTest, BestRBeatsOtherChoices) {
  const double eps = 5.0;
  const std::uint64_t delta = 4;
  const std::uint64_t best = StaircaseBestR(eps, delta);
  const double best_var = OptimalStaircaseVariance(eps, delta);
  for (std::uint64_t r = 1; r <= delta; ++r) {
    EXPECT_LE(best_var, StaircaseVariance({r, eps, delta}) + 1e-12);
  }
  EXPECT_DOUBLE_EQ(best_var, StaircaseVariance({best, eps, delta}));
}

TEST(StaircaseTest, HighBudgetRegime) {
  EXPECT_EQ(StaircaseBestR(20.0, 3), 1u);
  // Valid regime for the lower bound: eps >= ln(D(D+1)(2D+1)/2) = ln 42.
  const double lower = StaircaseVarianceLowerBound(20.0, 3);
  EXPECT_LE(lower, OptimalStaircaseVariance(20.0, 3));
  EXPECT_GT(lower, 0.0);
}

TEST(StaircaseTest, MsdLapTracksStaircaseAfterCorrection) {
  const double eps = 20.0;
  const std::uint64_t delta = 3;
  const std::uint64_t hole = ChooseHoleR(eps, delta);
  const double msd = MsdLapVariance(
      MsdLapParams::Contiguous(Rational::FromDouble(eps), delta, hole));
  const double stair = OptimalStaircaseVariance(eps, delta);
  const double correction =
      (1.0 + (2.0 * 3.0 - 1.0) * std::exp(-eps)) /
      ((1.0 - std::exp(-eps)) * (1.0 - std::exp(-eps)));
  // The two closed forms are arranged differently around e^-20-sized terms;
  // double evaluation matches the 50-digit reference to ~1e-11.
  EXPECT_NEAR(msd / stair / correction, kMsdStairRatio, 1e-9);
}

TEST(LogConvexityTest, GdlShapeFactsHold) {
  const LogConvexityReport report =
      CheckLogConvexity(GdlParams(Rational(1, 2), Rational(1)), 40, 2);
  EXPECT_TRUE(report.decreasing);
  EXPECT_TRUE(report.log_convex);
  // The worst window ratio is attained at the direct endpoint pair.
  EXPECT_NEAR(report.max_log_ratio, report.direct_log_ratio, 1e-9);
  EXPECT_NEAR(report.direct_log_ratio, kEpsExactA, 1e-10 * kEpsExactA);
}

}  // namespace
}  // namespace divnoise
