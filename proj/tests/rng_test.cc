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

#include "divnoise/rng.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

namespace divnoise {
namespace {

TEST(RngStreamTest, SameSeedSameWords) {
  RngStream a(42);
  RngStream b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.NextWord(), b.NextWord());
  }
}

TEST(RngStreamTest, DifferentSeedsDiffer) {
  RngStream a(1);
  RngStream b(2);
  int agreements = 0;
  for (int i = 0; i < 64; ++i) {
    if (a.NextWord() == b.NextWord()) ++agreements;
  }
  EXPECT_EQ(agreements, 0);
}

TEST(RngStreamTest, WordsDrawnCounts) {
  RngStream rng(7);
  EXPECT_EQ(rng.words_drawn(), 0u);
  rng.NextWord();
  rng.NextUnit();
  EXPECT_EQ(rng.words_drawn(), 2u);
}

TEST(RngStreamTest, NextUnitInHalfOpenInterval) {
  RngStream rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.NextUnit();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(RngStreamTest, NextUnitMeanNearHalf) {
  RngStream rng(13);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.NextUnit();
  const double mean = sum / n;
  // Uniform variance is 1/12; allow four standard errors.
  const double se = std::sqrt(1.0 / 12.0 / n);
  EXPECT_NEAR(mean, 0.5, 4.0 * se);
}

TEST(RngStreamTest, DeriveIsDeterministic) {
  const RngStream parent(99);
  RngStream child_a = parent.Derive(5);
  RngStream child_b = parent.Derive(5);
  for (int i = 0; i < 16; ++i) {
    EXPECT_EQ(child_a.NextWord(), child_b.NextWord());
  }
}

TEST(RngStreamTest, DerivedStreamsAreDistinct) {
  const RngStream parent(99);
  RngStream child_a = parent.Derive(1);
  RngStream child_b = parent.Derive(2);
  int agreements = 0;
  for (int i = 0; i < 64; ++i) {
    if (child_a.NextWord() == child_b.NextWord()) ++agreements;
  }
  EXPECT_EQ(agreements, 0);
  // Children also differ from the parent's own stream.
  RngStream parent_copy(99);
  RngStream child_c = parent.Derive(3);
  agreements = 0;
  for (int i = 0; i < 64; ++i) {
    if (parent_copy.NextWord() == child_c.NextWord()) ++agreements;
  }
  EXPECT_EQ(agreements, 0);
}

TEST(RngStreamTest, DeriveDoesNotAdvanceParent) {
  RngStream parent(123);
  const std::uint64_t before = parent.words_drawn();
  (void)parent.Derive(4);
  EXPECT_EQ(parent.words_drawn(), before);
}

TEST(RngStreamTest, BitBalance) {
  // Each bit position of the output should be set about half the time.
  RngStream rng(2026);
  const int n = 4096;
  std::vector<int> ones(64, 0);
  for (int i = 0; i < n; ++i) {
    std::uint64_t w = rng.NextWord();
    for (int b = 0; b < 64; ++b) {
      ones[b] += static_cast<int>((w >> b) & 1u);
    }
  }
  // Four sigma for a Binomial(n, 1/2) count.
  const double slack = 4.0 * std::sqrt(n / 4.0);
  for (int b = 0; b < 64; ++b) {
    EXPECT_NEAR(ones[b], n / 2.0, slack) << "bit " << b;
  }
}

}  // namespace
}  // namespace divnoise
