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

#include "divnoise/samplers.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "divnoise/errors.h"

namespace divnoise {
namespace {

// Iteration guard for loops that realize the target law directly (no
// rejection): reaching it means the parameters put essentially all mass
// beyond 2^34 primitive steps, which no supported configuration does.
constexpr std::int64_t kLawLoopCap = std::int64_t{1} << 34;

// Sequential inverse-CDF state cap; the rational partial sums grow with the
// index, so a run this long is a usage error rather than bad luck.
constexpr std::int64_t kInverseCdfCap = std::int64_t{1} << 20;

std::uint64_t ToUint64(const BigInt& value) {
  Require(value >= 0 &&
              value <= BigInt(std::numeric_limits<std::uint64_t>::max()),
          "sampled value exceeds uint64 range");
  return value.convert_to<std::uint64_t>();
}

// One Bernoulli(p) trial, exact in every form.
bool TrialSuccess(RngStream& rng, const TrialProb& p) {
  switch (p.form()) {
    case TrialProb::Form::kRatio:
      return BernoulliRatio(rng, p.value());
    case TrialProb::Form::kExpNeg:
      return BernoulliExpNeg(rng, p.value());
    case TrialProb::Form::kOneMinusExpNeg:
      return !BernoulliExpNeg(rng, p.value());
  }
  throw NumericError("TrialSuccess: unreachable form");
}

// Failures before the r-th success when runs of consecutive successes are
// geometric with rate run_rate, i.e. the realized success probability is
// e^-run_rate.  Each loop iteration consumes one failure, so the iteration
// count is 1 + NB(r, e^-run_rate).
std::int64_t BatchedIntegerNb(RngStream& rng, std::uint64_t r,
                              const Rational& run_rate) {
  BigInt successes = 0;
  std::int64_t failures = 0;
  while (true) {
    successes += GeometricExpNeg(rng, run_rate);
    if (successes >= r) return failures;
    ++failures;
    if (failures >= kLawLoopCap) {
      throw SamplerAbortError("BatchedIntegerNb: implausible run length");
    }
  }
}

// Failures before the r-th success as a sum of r geometric runs of failures,
// exact when the failure probability is e^-gamma (i.e. p = 1 - e^-gamma).
std::int64_t GeoSumIntegerNb(RngStream& rng, std::uint64_t r,
                             const Rational& gamma) {
  BigInt failures = 0;
  for (std::uint64_t j = 0; j < r; ++j) {
    failures += GeometricExpNeg(rng, gamma);
  }
  return ToInt64(failures);
}

// Failures before the r-th success, one Bernoulli trial at a time.  Exact in
// every form; linear cost.  Also serves as the waiting-time oracle.
std::int64_t WaitingIntegerNb(RngStream& rng, std::uint64_t r,
                              const TrialProb& p) {
  std::uint64_t successes = 0;
  std::int64_t failures = 0;
  while (successes < r) {
    if (TrialSuccess(rng, p)) {
      ++successes;
    } else {
      ++failures;
      if (failures >= kLawLoopCap) {
        throw SamplerAbortError("WaitingIntegerNb: implausible trial count");
      }
    }
  }
  return failures;
}

// Conjugate rate for batching a p = 1 - e^-gamma trial: runs of successes
// are geometric with rate -ln(1 - e^-gamma).  That rate is irrational, so
// round it onto the rational grid *upward* (denominator <= 10^6, with a
// relative guard covering the double evaluation error); the realized success
// probability is then <= p, so the sampled noise stochastically dominates
// the exact law — safe for privacy, and within ~1e-12 relative deviation.
Rational ConjugateRunRate(const Rational& gamma) {
  const double g = -std::log1p(-std::exp(-gamma.ToDouble()));
  return BestRationalAtLeast(g * (1.0 + 8e-16), 1000000);
}

// Ceiling of 1 / p, used to size rejection budgets.
std::uint64_t CeilInverseProb(const TrialProb& p) {
  if (p.form() == TrialProb::Form::kRatio) {
    const BigInt& num = p.value().num();
    const BigInt& den = p.value().den();
    return ToUint64((den + num - 1) / num);
  }
  const double approx = p.ApproxDouble();
  Require(approx > 0.0, "CeilInverseProb: vanishing success probability");
  const double ceil_inv = std::ceil(1.0 / approx);
  if (ceil_inv >= 9.2e18) return std::uint64_t{1} << 63;
  return static_cast<std::uint64_t>(ceil_inv);
}

// Exact Bernoulli chain for the Pochhammer acceptance ratio
// (r)_w / (ceil(r))_w with r = a/b: the i-th factor is (a+ib) / (b(R+i)).
bool AcceptPochhammer(RngStream& rng, const BigInt& a, const BigInt& b,
                      std::uint64_t big_r, std::int64_t w) {
  for (std::int64_t i = 0; i < w; ++i) {
    const BigInt num = a + BigInt(i) * b;
    const BigInt den = b * (BigInt(big_r) + BigInt(i));
    if (!BernoulliRatio(rng, Rational(num, den))) return false;
  }
  return true;
}

// Shared outer rejection for rational r: propose NB(ceil(r), p) from
// inner_sampler, accept with the exact Pochhammer ratio.  The overall
// acceptance probability is p^(ceil(r) - r) >= p, so 64 * ceil(1/p)
// rejections happen with probability under e^-64.
template <typename InnerSampler>
std::int64_t RationalNbRejection(RngStream& rng, const NbParams& params,
                                 InnerSampler inner_sampler) {
  const BigInt& a = params.r.num();
  const BigInt& b = params.r.den();
  const std::uint64_t big_r = ToUint64(a / b + 1);
  const std::uint64_t max_rejections = 64 * CeilInverseProb(params.p);
  for (std::uint64_t attempt = 0; attempt <= max_rejections; ++attempt) {
    const std::int64_t w = inner_sampler(rng, big_r, params.p);
    if (AcceptPochhammer(rng, a, b, big_r, w)) return w;
  }
  throw SamplerAbortError("SampleNb: rejection budget exhausted");
}

// Failures before the r-th success for *integer* r via sequential
// inverse-CDF over exact rational partial sums; p must be in ratio form.
std::int64_t InverseCdfIntegerNb(RngStream& rng, std::uint64_t r,
                                 const TrialProb& p) {
  Require(p.form() == TrialProb::Form::kRatio,
          "inverse-CDF sampler requires a ratio trial probability");
  Require(r <= 4096, "inverse-CDF sampler: stopping parameter too large");
  const Rational& prob = p.value();
  const Rational q = Rational(1) - prob;
  // f = pmf(k) = C(r+k-1, k) p^r q^k, maintained exactly.
  Rational f(boost::multiprecision::pow(prob.num(), static_cast<unsigned>(r)),
             boost::multiprecision::pow(prob.den(), static_cast<unsigned>(r)));
  Rational cum(0);
  for (std::int64_t k = 0; k < kInverseCdfCap; ++k) {
    const Rational hazard = f / (Rational(1) - cum);
    if (!(hazard < Rational(1))) return k;  // exact mass exhausted
    if (BernoulliRatio(rng, hazard)) return k;
    cum = cum + f;
    f = f * q * Rational(BigInt(r) + BigInt(k), BigInt(k) + 1);
  }
  throw SamplerAbortError("InverseCdfIntegerNb: index cap exceeded");
}

// Standard normal via Box-Muller; consumes two uniforms.
double SampleStandardNormal(RngStream& rng) {
  const double u1 = 1.0 - rng.NextUnit();  // in (0, 1]
  const double u2 = rng.NextUnit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  return radius * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Double-precision inverse-CDF NB(r, p) for the convergence demo only.
std::int64_t ApproxNbDouble(RngStream& rng, double r, double p) {
  const double u = rng.NextUnit();
  double log_f = r * std::log(p);
  const double log_q = std::log1p(-p);
  double cum = 0.0;
  for (std::int64_t k = 0;; ++k) {
    cum += std::exp(log_f);
    if (u < cum) return k;
    log_f += log_q + std::log((r + static_cast<double>(k)) /
                              (1.0 + static_cast<double>(k)));
    if (log_f < -745.0 || k >= kLawLoopCap) return k;  // mass exhausted
  }
}

// Two-sample Kolmogorov-Smirnov distance; sorts its arguments in place.
double TwoSampleKs(std::vector<double>& xs, std::vector<double>& ys) {
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double distance = 0.0;
  while (i < xs.size() && j < ys.size()) {
    if (xs[i] <= ys[j]) {
      ++i;
    } else {
      ++j;
    }
    distance = std::max(
        distance, std::abs(static_cast<double>(i) / nx -
                           static_cast<double>(j) / ny));
  }
  return distance;
}

}  // namespace

std::int64_t SampleIntegerNb(RngStream& rng, std::uint64_t r,
                             const TrialProb& p) {
  Require(r >= 1, "SampleIntegerNb: need at least one success");
  switch (p.form()) {
    case TrialProb::Form::kExpNeg:
      // Runs of successes are geometric with exactly the given rate.
      return BatchedIntegerNb(rng, r, p.value());
    case TrialProb::Form::kOneMinusExpNeg:
      // The exact path sums r geometric failure runs; batch with the
      // rounded conjugate rate only where the linear cost would dominate
      // and batching actually helps (p > 1/2).
      if (r <= 1024 || p.value().ToDouble() <= 0.6931471805599453) {
        return GeoSumIntegerNb(rng, r, p.value());
      }
      return BatchedIntegerNb(rng, r, ConjugateRunRate(p.value()));
    case TrialProb::Form::kRatio:
      return WaitingIntegerNb(rng, r, p);
  }
  throw NumericError("SampleIntegerNb: unreachable form");
}

std::int64_t SampleNb(RngStream& rng, const NbParams& params) {
  if (params.r.den() == 1) {
    return SampleIntegerNb(rng, ToUint64(params.r.num()), params.p);
  }
  return RationalNbRejection(
      rng, params,
      [](RngStream& inner_rng, std::uint64_t big_r, const TrialProb& p) {
        return SampleIntegerNb(inner_rng, big_r, p);
      });
}

std::int64_t SampleNbWaiting(RngStream& rng, const NbParams& params) {
  if (params.r.den() == 1) {
    return WaitingIntegerNb(rng, ToUint64(params.r.num()), params.p);
  }
  return RationalNbRejection(
      rng, params,
      [](RngStream& inner_rng, std::uint64_t big_r, const TrialProb& p) {
        return WaitingIntegerNb(inner_rng, big_r, p);
      });
}

std::int64_t SampleNbInverse(RngStream& rng, const NbParams& params) {
  if (params.r.den() == 1) {
    return InverseCdfIntegerNb(rng, ToUint64(params.r.num()), params.p);
  }
  return RationalNbRejection(
      rng, params,
      [](RngStream& inner_rng, std::uint64_t big_r, const TrialProb& p) {
        return InverseCdfIntegerNb(inner_rng, big_r, p);
      });
}

std::int64_t SampleDLap(RngStream& rng, const DLapParams& params) {
  const BigInt positive = GeometricExpNeg(rng, params.a);
  const BigInt negative = GeometricExpNeg(rng, params.a);
  return ToInt64(positive - negative);
}

std::int64_t SampleGdl(RngStream& rng, const GdlParams& params) {
  const NbParams nb = NbParams::FromGamma(params.beta, params.a);
  return SampleNb(rng, nb) - SampleNb(rng, nb);
}

SparseCounts SampleDirM(RngStream& rng, const DirMParams& params) {
  const BigInt& a = params.alpha.num();
  const BigInt& b = params.alpha.den();
  const BigInt fresh_region = BigInt(params.k) * a;
  std::vector<std::uint64_t> picked;
  picked.reserve(params.n);
  SparseCounts counts;
  for (std::uint64_t i = 0; i < params.n; ++i) {
    const BigInt total = fresh_region + BigInt(i) * b;
    const BigInt ball = UniformBelowBig(rng, total) + 1;  // in {1..total}
    std::uint64_t index;
    if (ball <= fresh_region) {
      // Fresh mass: each variate owns a cells of the region.
      index = ToUint64((ball + a - 1) / a);
    } else {
      // Reinforcement mass: each already-picked ball owns b cells.
      const BigInt offset = ball - fresh_region;
      const std::uint64_t position = ToUint64((offset + b - 1) / b);
      index = picked[position - 1];
    }
    picked.push_back(index);
    ++counts[index];
  }
  return counts;
}

SparseCounts SampleMultiNb(RngStream& rng, std::uint64_t k, const Rational& r,
                           const TrialProb& p) {
  Require(k >= 1, "SampleMultiNb: need at least one variate");
  const Rational total_r = Rational(BigInt(k), BigInt(1)) * r;
  const std::int64_t total = SampleNb(rng, NbParams(total_r, p));
  if (total == 0) return {};
  return SampleDirM(
      rng, DirMParams(static_cast<std::uint64_t>(total), k, r));
}

std::int64_t SampleMsdLap(RngStream& rng, const MsdLapParams& params) {
  const std::vector<std::uint64_t>& scales = params.scales();
  const std::uint64_t m = scales.size();
  const SparseCounts counts = SampleMultiNb(
      rng, 2 * m, Rational(1), TrialProb::OneMinusExpNeg(params.ScaleRate()));
  std::int64_t z = 0;
  for (const auto& [index, count] : counts) {
    if (index <= m) {
      z += static_cast<std::int64_t>(scales[index - 1]) *
           static_cast<std::int64_t>(count);
    } else {
      z -= static_cast<std::int64_t>(scales[index - m - 1]) *
           static_cast<std::int64_t>(count);
    }
  }
  if (params.hole_r() >= 1) {
    z = static_cast<std::int64_t>(params.hole_r()) * z +
        SampleDLap(rng, DLapParams(Rational(1, params.hole_r())));
  }
  return z;
}

std::int64_t SampleMsdLapNaive(RngStream& rng, const MsdLapParams& params) {
  const DLapParams per_scale(params.ScaleRate());
  std::int64_t z = 0;
  for (const std::uint64_t scale : params.scales()) {
    z += static_cast<std::int64_t>(scale) * SampleDLap(rng, per_scale);
  }
  if (params.hole_r() >= 1) {
    z = static_cast<std::int64_t>(params.hole_r()) * z +
        SampleDLap(rng, DLapParams(Rational(1, params.hole_r())));
  }
  return z;
}

double SampleLaplace(RngStream& rng, double scale) {
  Require(scale > 0.0, "SampleLaplace: scale must be positive");
  const double e1 = -std::log(1.0 - rng.NextUnit());
  const double e2 = -std::log(1.0 - rng.NextUnit());
  return scale * (e1 - e2);
}

double SampleGamma(RngStream& rng, double shape, double scale) {
  Require(shape > 0.0 && scale > 0.0,
          "SampleGamma: shape and scale must be positive");
  if (shape < 1.0) {
    const double boost_u = 1.0 - rng.NextUnit();  // in (0, 1]
    return SampleGamma(rng, shape + 1.0, scale) *
           std::pow(boost_u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    const double x = SampleStandardNormal(rng);
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = 1.0 - rng.NextUnit();  // in (0, 1]
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return d * v * scale;
    }
  }
}

double SampleContinuous(RngStream& rng, const ContinuousParams& params) {
  const std::int64_t inner = SampleMsdLap(rng, params.Inner());
  const double smoothing = SampleLaplace(rng, params.hole_width / 2.0);
  return params.sensitivity *
         (params.hole_width * static_cast<double>(inner) + smoothing);
}

double SampleArete(RngStream& rng, double k, double theta, double lambda) {
  return SampleGamma(rng, k, theta) - SampleGamma(rng, k, theta) +
         SampleLaplace(rng, lambda);
}

std::vector<AreteConvergenceRow> DemoAreteConvergence(
    RngStream& rng, double k, double theta, double lambda,
    const std::vector<std::uint64_t>& delta_ds, std::size_t n_samples) {
  Require(n_samples >= 2, "DemoAreteConvergence: need at least two samples");
  std::vector<AreteConvergenceRow> rows;
  rows.reserve(delta_ds.size());
  for (const std::uint64_t delta_d : delta_ds) {
    Require(delta_d >= 1, "DemoAreteConvergence: discretization must be >= 1");
    const double a = 1.0 / (theta * static_cast<double>(delta_d));
    const double p = -std::expm1(-a);  // 1 - e^-a
    std::vector<double> approx(n_samples);
    std::vector<double> exact(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
      const std::int64_t gdl =
          ApproxNbDouble(rng, k, p) - ApproxNbDouble(rng, k, p);
      approx[s] = SampleLaplace(rng, lambda) +
                  static_cast<double>(gdl) / static_cast<double>(delta_d);
      exact[s] = SampleArete(rng, k, theta, lambda);
    }
    rows.push_back({delta_d, TwoSampleKs(approx, exact)});
  }
  return rows;
}

}  // namespace divnoise
