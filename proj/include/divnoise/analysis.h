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

#ifndef DIVNOISE_ANALYSIS_H_
#define DIVNOISE_ANALYSIS_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "divnoise/distributions.h"

namespace divnoise {

// Closed-form PMFs, privacy accountants, calibration rules, and variance
// formulas.  Everything here is double precision with stated tolerances;
// exactness is required only of the samplers.

// ---------------------------------------------------------------------------
// Special functions.

// Natural log of the Gamma function.  x must avoid the poles (x > 0 or
// non-integer); accurate to ~1e-12 relative.
double LnGamma(double x);

// Rising factorial (x)(x+1)...(x+n-1); empty product for n = 0.  Computed as
// a direct product for small n and via LnGamma ratios for large n (x > 0).
double Pochhammer(double x, unsigned n);

// Gauss hypergeometric series F(a, b; c; z) for 0 <= z < 1 and c not a
// non-positive integer, summed until the remaining geometric tail is below
// 1e-15 of the partial sum.  LogHyp2f1 returns ln F and stays finite where F
// itself would overflow.  Throws NumericError if 10^6 terms do not converge.
double Hyp2f1(double a, double b, double c, double z);
double LogHyp2f1(double a, double b, double c, double z);

// ---------------------------------------------------------------------------
// PMFs.

// NB(r, p) at k >= 0: Gamma(r+k) / (Gamma(r) k!) * p^r (1-p)^k.
double NbPmf(double r, double p, std::int64_t k);

// DLap(a) at integer k: tanh(a/2) e^(-a|k|).
double DLapPmf(double a, std::int64_t k);

// GDL(beta, a) at integer k, via the hypergeometric closed form
//   e^(-a|k|) (1-e^-a)^(2 beta) F(beta, beta+|k|; 1+|k|; e^-2a)
//     * Gamma(beta+|k|) / (Gamma(1+|k|) Gamma(beta)).
double GdlPmf(double beta, double a, std::int64_t k);

// A dense PMF table over the contiguous support [min_value,
// min_value + probs.size() - 1], with all mass outside bounded by
// tail_bound.
struct PmfTable {
  std::int64_t min_value = 0;
  std::vector<double> probs;
  double tail_bound = 0.0;

  double At(std::int64_t k) const {
    std::int64_t idx = k - min_value;
    if (idx < 0 || idx >= static_cast<std::int64_t>(probs.size())) return 0.0;
    return probs[static_cast<std::size_t>(idx)];
  }
  std::int64_t max_value() const {
    return min_value + static_cast<std::int64_t>(probs.size()) - 1;
  }
};

// Exact-convolution PMF table for the multi-scale mechanism: convolves the
// per-scale DLap PMFs (and the hole-smoothing DLap when hole_r >= 1) on a
// truncated support chosen so the total omitted mass is below tail_bound.
PmfTable BuildMsdLapPmfTable(const MsdLapParams& params,
                             double tail_bound = 1e-14);

// PMF table for any supported univariate distribution, truncated to
// tail_bound.  For NB the support starts at 0; the others are symmetric.
PmfTable BuildPmfTable(const DiscreteDist& dist, double tail_bound = 1e-14);

// Point PMF for any supported univariate distribution.  For MsdLapParams
// this builds the convolution table internally, so bulk evaluation should
// use BuildPmfTable / BuildMsdLapPmfTable instead.
double Pmf(const DiscreteDist& dist, std::int64_t k);

// ---------------------------------------------------------------------------
// Privacy accountants.

enum class PrivacyMethod {
  kExactHypergeometric,  // beta in (0,1): exact max divergence
  kPostprocessingDLap,   // beta >= 1: a*delta upper bound via postprocessing
};

struct PrivacyBound {
  double eps = 0.0;                 // certified bound (the tightest offered)
  std::optional<double> eps_exact;  // exact divergence; beta in (0,1) only
  double eps_simplified = 0.0;      // a*delta + ln(delta/beta)
  double eps_wendel = 0.0;  // a*delta + (1-beta) ln(beta+delta) + lnG(beta)
  PrivacyMethod method = PrivacyMethod::kExactHypergeometric;
};

// Privacy of GDL(beta, a)-noise addition at integer sensitivity delta >= 1.
// For beta in (0, 1) the exact epsilon is
//   a*delta + ln[ F(b,b;1;z) / F(b,b+D;1+D;z) ] + lnGamma(D+1)
//     + lnGamma(b) - lnGamma(b+D),   z = e^-2a,
// which equals ln(pmf(0)/pmf(delta)).  For beta >= 1 the mechanism
// postprocesses DLap(a), giving eps = a*delta.
PrivacyBound GdlEpsilon(double beta, double a, std::uint64_t delta);
PrivacyBound GdlEpsilon(const GdlParams& params, std::uint64_t delta);

// Privacy budget consumed by a multi-scale configuration: eps for the plain
// and difference-set variants, and 1 + (eps - 1) = eps for the smoothed
// variant (unit budget for the gap-filling DLap, eps - 1 for the scales).
double MsdLapEpsilon(const MsdLapParams& params);

// ---------------------------------------------------------------------------
// Calibration.

// Variance-optimized GDL calibration: beta = delta e^(2-eps), a = 2/delta.
// Valid only for eps > 2 + ln(delta); rejects otherwise.  The returned
// rationals are exact images of the double-precision values, so sampling
// realizes precisely the distribution the accountant certifies.
GdlParams CalibrateGdl(double eps, std::uint64_t delta);

// Variance of the calibrated GDL: delta e^(2-eps) / (cosh(2/delta) - 1).
double CalibratedGdlVariance(double eps, std::uint64_t delta);

// Hole parameter minimizing the smoothed multi-scale variance: the better of
// r = 0 and r = min(delta, ceil(e^(-eps/3) delta)), smaller r on ties.
// Requires eps >= 2.
std::uint64_t ChooseHoleR(double eps, std::uint64_t delta);

// Discrete-to-continuous transformation at total budget eps >= 2 for a
// continuous query of sensitivity `sensitivity`:
//   Z = sensitivity * (hole_width * X + Y)
// with X the plain multi-scale mechanism at budget eps - 1 for sensitivity
// delta_d = ceil(e^(eps/3)), hole_width = 1/delta_d, and Y ~ Lap(r/2)
// continuous smoothing.
struct ContinuousParams {
  Rational eps;
  double sensitivity = 0.0;
  std::uint64_t delta_d = 0;
  double hole_width = 0.0;
  double variance = 0.0;

  // The discrete mechanism the transformation scales down.
  MsdLapParams Inner() const {
    return MsdLapParams::Contiguous(eps - Rational(1), delta_d);
  }
};
ContinuousParams CalibrateContinuous(const Rational& eps, double sensitivity);

// ---------------------------------------------------------------------------
// Variances (exact closed forms, not big-O).

double NbVariance(double r, double p);     // r (1-p) / p^2
double DLapVariance(double a);             // 1 / (cosh a - 1)
double GdlVariance(double beta, double a); // beta / (cosh a - 1)
double MsdLapVariance(const MsdLapParams& params);
double Variance(const DiscreteDist& dist);

// ---------------------------------------------------------------------------
// Discrete staircase baseline (variance only; not sampled).

struct StaircaseParams {
  std::uint64_t r = 1;  // central stair half-width, in {1..delta}
  double eps = 0.0;
  std::uint64_t delta = 1;
};

// PMF of the discrete staircase at integer i (normalization a(r) included).
double StaircasePmf(const StaircaseParams& params, std::int64_t i);

// Closed-form variance from the symbolic formula
//   (x1 + x2 + x3) / (3 z^2 (1 - 2r + e^eps (2r - 1) + 2 delta)),
// z = e^eps - 1.
double StaircaseVariance(const StaircaseParams& params);

// Variance lower bound delta (delta+1) (2 delta+1) / (3 (e^eps + 2 delta-1)),
// valid for eps >= ln(delta (delta+1) (2 delta+1) / 2).
double StaircaseVarianceLowerBound(double eps, std::uint64_t delta);

// r in {1..delta} minimizing StaircaseVariance, and that minimal variance.
std::uint64_t StaircaseBestR(double eps, std::uint64_t delta);
double OptimalStaircaseVariance(double eps, std::uint64_t delta);

// ---------------------------------------------------------------------------
// Shape checks backing the privacy proofs.

struct LogConvexityReport {
  bool decreasing = false;       // pmf(k) >= pmf(k+1) on [0, radius]
  bool log_convex = false;       // pmf(k) pmf(k+2) >= pmf(k+1)^2
  double worst_margin = 0.0;     // most negative slack seen in either check
  double max_log_ratio = 0.0;    // max over |xi| <= delta, k of
                                 //   ln(pmf(k - xi) / pmf(k)) in the window
  double direct_log_ratio = 0.0; // ln(pmf(0) / pmf(delta))
};

// Verifies monotonicity and log-convexity of the GDL PMF on [0, radius] for
// beta in (0, 1), and that the worst shift ratio over the scanned window is
// the endpoint ratio pmf(0)/pmf(delta).
LogConvexityReport CheckLogConvexity(const GdlParams& params,
                                     std::uint64_t radius,
                                     std::uint64_t delta);

}  // namespace divnoise

#endif  // DIVNOISE_ANALYSIS_H_
