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

#ifndef DIVNOISE_SAMPLERS_H_
#define DIVNOISE_SAMPLERS_H_

#include <cstdint>
#include <vector>

#include "divnoise/analysis.h"
#include "divnoise/distributions.h"
#include "divnoise/exact_rand.h"
#include "divnoise/rng.h"

namespace divnoise {

// Discrete samplers.  Every discrete routine below realizes its target law
// exactly, with one documented exception: the batched negative binomial path
// taken for large integer stopping parameters when the success probability
// is given in 1 - e^-gamma form must round the conjugate rate
// -ln(1 - e^-gamma) onto the rational grid (denominator <= 10^6, rounded
// *up* so the realized distribution only adds noise).  The rounding shifts
// the law by a relative ~1e-12; callers needing the unrounded law can stay
// on the linear-time path by keeping the stopping parameter small or by
// supplying the probability in e^-gamma or ratio form.

// Number of failures before the r-th success in Bernoulli(p) trials,
// r >= 1 integral.  Expected cost is O(1 + r (1-p) / p) primitive draws on
// the batched paths (success runs counted geometrically), O(r) on the
// linear path.
std::int64_t SampleIntegerNb(RngStream& rng, std::uint64_t r,
                             const TrialProb& p);

// NB(r, p) for rational r > 0: proposes NB(ceil(r), p) and accepts with the
// exact Pochhammer ratio (r)_w / (ceil(r))_w, realized as a chain of exact
// rational Bernoulli trials with early exit.  Aborts after 64 * ceil(1/p)
// consecutive rejections (probability < 2^-64 on valid parameters).
std::int64_t SampleNb(RngStream& rng, const NbParams& params);

// Independent oracle: waiting-time sampler running the Bernoulli process one
// trial at a time, O(r/p) expected cost.  Same law as SampleNb.
std::int64_t SampleNbWaiting(RngStream& rng, const NbParams& params);

// Independent oracle: sequential inverse-CDF sampler over exact rational
// partial sums.  Requires p in ratio form.  Same law as SampleNb.
std::int64_t SampleNbInverse(RngStream& rng, const NbParams& params);

// Discrete Laplace DLap(a) as a difference of two geometric draws.
std::int64_t SampleDLap(RngStream& rng, const DLapParams& params);

// GDL(beta, a) as a difference of two NB(beta, 1 - e^-a) draws.
std::int64_t SampleGdl(RngStream& rng, const GdlParams& params);

// Polya-urn sampler for the symmetric Dirichlet-multinomial; output is the
// sparse count map (1-based variate indices, zeros omitted).  O(n) draws.
SparseCounts SampleDirM(RngStream& rng, const DirMParams& params);

// k i.i.d. NB(r, p) variates, output sparsely: draws the total
// T ~ NB(k r, p) first, then allocates it with one Dirichlet-multinomial
// round, touching only the nonzero variates.
SparseCounts SampleMultiNb(RngStream& rng, std::uint64_t k, const Rational& r,
                           const TrialProb& p);

// Multi-scale discrete Laplace noise.  The fast path draws one sparse
// multivariate NB batch (two variates per scale) instead of |scales|
// separate DLap draws; the smoothed variant adds the scaled inner value to
// a gap-filling DLap(1/hole_r).
std::int64_t SampleMsdLap(RngStream& rng, const MsdLapParams& params);

// Independent oracle: per-scale DLap draws summed directly.
std::int64_t SampleMsdLapNaive(RngStream& rng, const MsdLapParams& params);

// ---------------------------------------------------------------------------
// Continuous samplers (double precision; NOT exact — the exactness contract
// covers discrete sampling only).

// Laplace with scale b: density e^(-|x|/b) / (2b).
double SampleLaplace(RngStream& rng, double scale);

// Gamma(shape, scale) via Marsaglia-Tsang squeeze (shape >= 1) with the
// standard U^(1/shape) boost for shape < 1.
double SampleGamma(RngStream& rng, double shape, double scale);

// The discrete-to-continuous mechanism: sensitivity * (hole_width * X + Y)
// with X the inner multi-scale draw and Y ~ Lap(hole_width / 2).
double SampleContinuous(RngStream& rng, const ContinuousParams& params);

// Arete(k, theta, lambda): Gamma(k, theta) - Gamma(k, theta) + Lap(lambda).
double SampleArete(RngStream& rng, double k, double theta, double lambda);

// ---------------------------------------------------------------------------
// Convergence demonstration: the scaled-GDL-plus-Laplace construction
// approaches the Arete distribution as the discretization grows.

struct AreteConvergenceRow {
  std::uint64_t delta_d = 0;
  double ks_statistic = 0.0;  // two-sample Kolmogorov-Smirnov distance
};

// For each discretization Delta_d, draws n_samples of
// Lap(lambda) + GDL(k, 1/(theta Delta_d)) / Delta_d and n_samples of
// Arete(k, theta, lambda) and reports their KS distance.  The GDL half uses
// a double-precision inverse-CDF negative binomial internally (this is a
// distributional convergence demo, not an exactness claim).
std::vector<AreteConvergenceRow> DemoAreteConvergence(
    RngStream& rng, double k, double theta, double lambda,
    const std::vector<std::uint64_t>& delta_ds, std::size_t n_samples);

}  // namespace divnoise

#endif  // DIVNOISE_SAMPLERS_H_
