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

#include "divnoise/exact_rand.h"

#include <cmath>
#include <cstdint>

#include <gtest/gtest.h>

#include "divnoise/errors.h"
#include "divnoise/rational.h"
#include "divnoise/rng.h"

namespace divnoise {
namespace {

// mpmath: exp(-2.5)
constexpr double kExpNeg25 = 0.08208499862389879517;
// mpmath: 1 - exp(-1/2)
constexpr double kGeoHalfP0 = 0.3934693402873665764;
// mpmath: exp(-1/2) / (1 - exp(-1/2))
constexpr double kGeoHalfMean = 1.5414940825367982841;

TEST(UniformBelowTest, StaysInRange) {
  RngStream rng(1);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LT(UniformBelow(rng, 37), 37u);
  }
}

TEST(UniformBelowTest, BoundOneIsConstantZero) {
  RngStream rng(2);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(UniformBelow(rng, 1), 0u);
  }
}

TEST(UniformBelowTest, ZeroBoundThrows) {
  RngStream rng(3);
  EXPECT_THROW(UniformBelow(rng, 0), PreconditionError);
}

TEST(UniformBelowTest, MeanMatches) {
  RngStream rng(4);
  const int n = 100000;
  const std::uint64_t bound = 1000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += static_cast<double>(UniformBelow(rng, bound));
  }
  const double mean = sum / n;
  const double expect = (bound - 1) / 2.0;
  const double se = std::sqrt((bound * bound - 1.0) / 12.0 / n);
  EXPECT_NEAR(mean, expect, 4.0 * se);
}

TEST(UniformIntTest, OneBased) {
  RngStream rng(5);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t v = UniformInt(rng, 6);
    EXPECT_GE(v, 1u);
    EXPECT_LE(v, 6u);
  }
}

TEST(UniformBelowBigTest, ExercisesHighBits) {
  RngStream rng(6);
  const BigInt bound = BigInt(1) << 80;
  const BigInt word_limit = BigInt(1) << 64;
  bool saw_high = false;
  for (int i = 0; i < 50; ++i) {
    const BigInt v = UniformBelowBig(rng, bound);
    EXPECT_GE(v, 0);
    EXPECT_LT(v, bound);
    if (v >= word_limit) saw_high = true;
  }
  // A draw below 2^64 has probability 2^-16 per trial.
  EXPECT_TRUE(saw_high);
}

TEST(UniformBelowBigTest, NonPositiveBoundThrows) {
  RngStream rng(7);
  EXPECT_THROW(UniformBelowBig(rng, BigInt(0)), PreconditionError);
}

TEST(BernoulliRatioTest, DegenerateEndpoints) {
  RngStream rng(8);
  for (int i = 0; i < 100; ++i) {
    EXPECT_TRUE(BernoulliRatio(rng, Rational(1)));
    EXPECT_FALSE(BernoulliRatio(rng, Rational(0)));
  }
}

TEST(BernoulliRatioTest, FrequencyMatches) {
  RngStream rng(9);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    hits += BernoulliRatio(rng, Rational(1, 3)) ? 1 : 0;
  }
  const double p = 1.0 / 3.0;
  const double se = std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(static_cast<double>(hits) / n, p, 4.0 * se);
}

TEST(BernoulliExpNegTest, SmallRateFrequency) {
  RngStream rng(10);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    hits += BernoulliExpNeg(rng, Rational(1)) ? 1 : 0;
  }
  const double p = std::exp(-1.0);
  const double se = std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(static_cast<double>(hits) / n, p, 4.0 * se);
}

TEST(BernoulliExpNegTest, LargeRateFrequency) {
  // gamma = 5/2 > 1 exercises the unit-rate factorization.
  RngStream rng(11);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    hits += BernoulliExpNeg(rng, Rational(5, 2)) ? 1 : 0;
  }
  const double se = std::sqrt(kExpNeg25 * (1 - kExpNeg25) / n);
  EXPECT_NEAR(static_cast<double>(hits) / n, kExpNeg25, 4.0 * se);
}

TEST(BernoulliExpNegTest, ZeroRateAlwaysTrue) {
  RngStream rng(12);
  for (int i = 0; i < 100; ++i) {
    EXPECT_TRUE(BernoulliExpNeg(rng, Rational(0)));
  }
}

TEST(GeometricExpNegTest, MassAtZeroAndMean) {
  RngStream rng(13);
  const int n = 200000;
  int zeros = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::int64_t v = ToInt64(GeometricExpNeg(rng, Rational(1, 2)));
    ASSERT_GE(v, 0);
    zeros += v == 0 ? 1 : 0;
    sum += static_cast<double>(v);
    sum_sq += static_cast<double>(v) * static_cast<double>(v);
  }
  const double p0_se = std::sqrt(kGeoHalfP0 * (1 - kGeoHalfP0) / n);
  EXPECT_NEAR(static_cast<double>(zeros) / n, kGeoHalfP0, 4.0 * p0_se);
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  EXPECT_NEAR(mean, kGeoHalfMean, 4.0 * std::sqrt(var / n));
}

TEST(GeometricExpNegTest, LargeRateConcentratesAtZero) {
  RngStream rng(14);
  const int n = 10000;
  int zeros = 0;
  for (int i = 0; i < n; ++i) {
    zeros += GeometricExpNeg(rng, Rational(20)) == 0 ? 1 : 0;
  }
  // P(0) = 1 - e^-20; a nonzero draw in 10^4 trials has probability ~2e-5.
  EXPECT_GE(zeros, n - 1);
}

TEST(GeometricExpNegTest, TinyRateHasLargeValues) {
  // gamma = 1/1000: mean about 1000, reached in O(1) expected draws.
  RngStream rng(15);
  const int n = 2000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += static_cast<double>(ToInt64(GeometricExpNeg(rng, Rational(1, 1000))));
  }
  const double mean = sum / n;
  const double expect = std::exp(-0.001) / (1.0 - std::exp(-0.001));
  // Geometric sd is about the mean, so four standard errors of the sample
  // mean is 4 * mean / sqrt(n).
  EXPECT_NEAR(mean, expect, 4.0 * expect / std::sqrt(static_cast<double>(n)));
}

TEST(GeometricExpNegTest, NonPositiveRateThrows) {
  RngStream rng(16);
  EXPECT_THROW(GeometricExpNeg(rng, Rational(0)), PreconditionError);
  EXPECT_THROW(GeometricExpNeg(rng, Rational(-1)), PreconditionError);
}

TEST(ToInt64Test, RoundTripsAndChecksRange) {
  EXPECT_EQ(ToInt64(BigInt(-5)), -5);
  EXPECT_EQ(ToInt64(BigInt(0)), 0);
  const BigInt big = BigInt(1) << 70;
  EXPECT_THROW(ToInt64(big), PreconditionError);
}

TEST(DeterminismTest, SameSeedSameDraws) {
  RngStream a(77);
  RngStream b(77);
  for (int i = 0; i < 200; ++i) {
    EXPECT_EQ(GeometricExpNeg(a, Rational(1, 3)),
              GeometricExpNeg(b, Rational(1, 3)));
  }
}

}  // namespace
}  // namespace divnoise
