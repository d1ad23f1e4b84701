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

#ifndef DIVNOISE_EXACT_RAND_H_
#define DIVNOISE_EXACT_RAND_H_

#include <cstdint>

#include "divnoise/rational.h"
#include "divnoise/rng.h"

namespace divnoise {

// Exact sampling primitives.  Each routine realizes its target distribution
// *exactly* — the only randomness consumed is uniform 64-bit words, and the
// output law involves no floating-point approximation.  Probabilities and
// rates enter as exact Rationals.
//
// All routines are rejection-style with expected O(1) iterations and carry a
// generous iteration cap; exceeding the cap (probability far below 2^-64 on
// valid input) raises SamplerAbortError.

// Uniform integer in [0, bound).  bound must be positive.
std::uint64_t UniformBelow(RngStream& rng, std::uint64_t bound);

// Uniform integer in {1, ..., bound}.  bound must be positive.
inline std::uint64_t UniformInt(RngStream& rng, std::uint64_t bound) {
  return UniformBelow(rng, bound) + 1;
}

// Uniform integer in [0, bound) for arbitrary-precision bound > 0.
BigInt UniformBelowBig(RngStream& rng, const BigInt& bound);

// Bernoulli(p) for exact rational p in [0, 1].
bool BernoulliRatio(RngStream& rng, const Rational& p);

// Bernoulli(exp(-gamma)) for exact rational gamma >= 0, via the alternating
// series acceptance scheme (no transcendental evaluation).
bool BernoulliExpNeg(RngStream& rng, const Rational& gamma);

// Geometric on {0, 1, 2, ...} with P(Y = y) = (1 - e^-gamma) e^-(gamma y),
// for exact rational gamma > 0.  Expected cost is O(1) uniform draws
// regardless of gamma; the value is exact.
BigInt GeometricExpNeg(RngStream& rng, const Rational& gamma);

// Checked narrowing of a sampled BigInt into int64 range.
std::int64_t ToInt64(const BigInt& value);

}  // namespace divnoise

#endif  // DIVNOISE_EXACT_RAND_H_
