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

#include <limits>

#include "divnoise/errors.h"

namespace divnoise {

namespace {

// Iteration budgets.  Each loop terminates per iteration with probability
// at least 1 - e^-1, so these caps put the abort probability far below
// 2^-64; hitting one indicates a broken RNG rather than bad luck.
constexpr int kBernoulliSeriesCap = 512;
constexpr int kRejectionCap = 4096;

}  // namespace

std::uint64_t UniformBelow(RngStream& rng, std::uint64_t bound) {
  Require(bound > 0, "UniformBelow: bound must be positive");
  if ((bound & (bound - 1)) == 0) {
    return rng.NextWord() & (bound - 1);
  }
  // Classic unbiased rejection: discard the top partial block of 2^64.
  std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % bound + 1) %
                      bound;
  std::uint64_t limit = 0 - rem;  // 2^64 - rem, wrapped
  for (int i = 0; i < kRejectionCap; ++i) {
    std::uint64_t w = rng.NextWord();
    if (w < limit) return w % bound;
  }
  throw SamplerAbortError("UniformBelow: rejection cap exceeded");
}

BigInt UniformBelowBig(RngStream& rng, const BigInt& bound) {
  Require(bound > 0, "UniformBelowBig: bound must be positive");
  if (bound <= std::numeric_limits<std::uint64_t>::max()) {
    return BigInt(UniformBelow(rng, static_cast<std::uint64_t>(bound)));
  }
  // Draw msb(bound)+1 random bits; accept when below bound.  Since
  // bound >= 2^(bits-1), each attempt accepts with probability >= 1/2.
  unsigned bits = boost::multiprecision::msb(bound) + 1;
  unsigned words = (bits + 63) / 64;
  unsigned top_bits = bits - 64 * (words - 1);
  std::uint64_t top_mask = top_bits >= 64
                               ? ~std::uint64_t{0}
                               : ((std::uint64_t{1} << top_bits) - 1);
  for (int i = 0; i < kRejectionCap; ++i) {
    BigInt value = 0;
    for (unsigned w = 0; w < words; ++w) {
      std::uint64_t word = rng.NextWord();
      // The first word drawn lands in the most significant position after
      // the remaining shifts, so it carries the partial top bits.
      if (w == 0) word &= top_mask;
      value <<= 64;
      value |= BigInt(word);
    }
    if (value < bound) return value;
  }
  throw SamplerAbortError("UniformBelowBig: rejection cap exceeded");
}

bool BernoulliRatio(RngStream& rng, const Rational& p) {
  Require(!p.IsNegative() && p <= Rational(1),
          "BernoulliRatio: p must lie in [0, 1]");
  if (p.IsZero()) return false;
  if (p.num() == p.den()) return true;
  return UniformBelowBig(rng, p.den()) < p.num();
}

namespace {

// Bernoulli(exp(-gamma)) for gamma in [0, 1]: run A_k ~ Bernoulli(gamma / k)
// until the first failure at index K; P(K odd) telescopes to the alternating
// series for exp(-gamma).
bool BernoulliExpNegAtMostOne(RngStream& rng, const Rational& gamma) {
  int k = 1;
  while (k < kBernoulliSeriesCap) {
    Rational trial(gamma.num(), gamma.den() * k);
    if (!BernoulliRatio(rng, trial)) return (k % 2) == 1;
    ++k;
  }
  throw SamplerAbortError("BernoulliExpNeg: series cap exceeded");
}

}  // namespace

bool BernoulliExpNeg(RngStream& rng, const Rational& gamma) {
  Require(!gamma.IsNegative(), "BernoulliExpNeg: gamma must be >= 0");
  if (gamma.IsZero()) return true;
  if (gamma <= Rational(1)) return BernoulliExpNegAtMostOne(rng, gamma);
  // exp(-gamma) = exp(-1)^floor(gamma) * exp(-frac); take the unit-rate
  // factors one at a time with early exit.
  BigInt whole = gamma.num() / gamma.den();
  Require(whole <= BigInt(1) << 20,
          "BernoulliExpNeg: gamma unreasonably large");
  std::uint64_t reps = static_cast<std::uint64_t>(whole);
  Rational one(1);
  for (std::uint64_t i = 0; i < reps; ++i) {
    if (!BernoulliExpNegAtMostOne(rng, one)) return false;
  }
  Rational frac = gamma - Rational(whole, 1);
  if (frac.IsZero()) return true;
  return BernoulliExpNegAtMostOne(rng, frac);
}

BigInt GeometricExpNeg(RngStream& rng, const Rational& gamma) {
  Require(gamma.Sign() > 0, "GeometricExpNeg: gamma must be > 0");
  const BigInt& n = gamma.num();
  const BigInt& d = gamma.den();
  // Stage 1: U uniform on [0, d) accepted with probability exp(-U/d); the
  // accepted U is the low digit of a unit-rate geometric in base d.
  BigInt u;
  bool accepted = false;
  for (int i = 0; i < kRejectionCap; ++i) {
    u = UniformBelowBig(rng, d);
    if (BernoulliExpNeg(rng, Rational(u, d))) {
      accepted = true;
      break;
    }
  }
  if (!accepted) {
    throw SamplerAbortError("GeometricExpNeg: acceptance cap exceeded");
  }
  // Stage 2: V counts successive Bernoulli(exp(-1)) successes, giving the
  // high digits.  X = U + d V is geometric with rate 1/d; dividing by n
  // contracts it to rate gamma = n/d.
  BigInt v = 0;
  int steps = 0;
  while (BernoulliExpNeg(rng, Rational(1))) {
    ++v;
    if (++steps >= kRejectionCap) {
      throw SamplerAbortError("GeometricExpNeg: tail cap exceeded");
    }
  }
  BigInt x = u + d * v;
  return x / n;
}

std::int64_t ToInt64(const BigInt& value) {
  Require(value >= std::numeric_limits<std::int64_t>::min() &&
              value <= std::numeric_limits<std::int64_t>::max(),
          "ToInt64: sampled value exceeds int64 range");
  return static_cast<std::int64_t>(value);
}

}  // namespace divnoise
