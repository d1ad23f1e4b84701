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

#ifndef DIVNOISE_DISTRIBUTIONS_H_
#define DIVNOISE_DISTRIBUTIONS_H_

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

#include "divnoise/errors.h"
#include "divnoise/rational.h"

namespace divnoise {

// A Bernoulli success probability in one of three exactly representable
// forms.  Exact samplers can realize each form without rounding:
//
//   kRatio:          p = value                 (value in (0, 1))
//   kOneMinusExpNeg: p = 1 - exp(-value)       (value > 0)
//   kExpNeg:         p = exp(-value)           (value > 0)
//
// The privacy-canonical parameterization is kOneMinusExpNeg (a discrete
// Laplace of scale a is a difference of NB(., 1 - e^-a) draws), but the
// sublinear batched sampler is exact only in kExpNeg form, and user-facing
// probabilities like 3/4 are exact only in kRatio form.  Carrying the form
// explicitly lets each sampler pick its exact path.
class TrialProb {
 public:
  enum class Form { kRatio, kOneMinusExpNeg, kExpNeg };

  static TrialProb Ratio(const Rational& p) {
    Require(p.Sign() > 0 && p < Rational(1),
            "TrialProb: ratio must lie in (0, 1)");
    return TrialProb(Form::kRatio, p);
  }
  static TrialProb OneMinusExpNeg(const Rational& gamma) {
    Require(gamma.Sign() > 0, "TrialProb: rate must be positive");
    return TrialProb(Form::kOneMinusExpNeg, gamma);
  }
  static TrialProb ExpNeg(const Rational& gamma) {
    Require(gamma.Sign() > 0, "TrialProb: rate must be positive");
    return TrialProb(Form::kExpNeg, gamma);
  }

  Form form() const { return form_; }
  // The stored rational: p itself for kRatio, the rate otherwise.
  const Rational& value() const { return value_; }

  // Approximate success probability, for cost estimates and analysis only.
  double ApproxDouble() const;

 private:
  TrialProb(Form form, Rational value) : form_(form), value_(std::move(value)) {}

  Form form_;
  Rational value_;
};

// Negative binomial NB(r, p): the number of failures seen before the r-th
// success in i.i.d. Bernoulli(p) trials, generalized to real r > 0 via the
// Gamma-function PMF.
struct NbParams {
  Rational r;
  TrialProb p;

  NbParams(Rational r_in, TrialProb p_in)
      : r(std::move(r_in)), p(std::move(p_in)) {
    Require(r.Sign() > 0, "NbParams: r must be positive");
  }

  // Privacy-canonical helper: NB(r, 1 - e^-gamma).
  static NbParams FromGamma(const Rational& r, const Rational& gamma) {
    return NbParams(r, TrialProb::OneMinusExpNeg(gamma));
  }
};

// Discrete Laplace DLap(a): pmf(k) proportional to e^(-a|k|).
struct DLapParams {
  Rational a;

  explicit DLapParams(Rational a_in) : a(std::move(a_in)) {
    Require(a.Sign() > 0, "DLapParams: scale must be positive");
  }
};

// Generalized discrete Laplace GDL(beta, a): the law of Z1 - Z2 where
// Z1, Z2 are i.i.d. NB(beta, 1 - e^-a).  beta = 1 recovers DLap(a).
struct GdlParams {
  Rational beta;
  Rational a;

  GdlParams(Rational beta_in, Rational a_in)
      : beta(std::move(beta_in)), a(std::move(a_in)) {
    Require(beta.Sign() > 0, "GdlParams: beta must be positive");
    Require(a.Sign() > 0, "GdlParams: a must be positive");
  }
};

// Multi-scale discrete Laplace noise for sensitivity delta:
//
//   hole_r = 0:  Z = sum over i in scales of i * X_i, X_i i.i.d. DLap(eps).
//                scales defaults to {1..delta}; a custom scale set replaces
//                it (values must be distinct and positive).
//   hole_r >= 1: Z = hole_r * X + Y where X is the hole_r = 0 mechanism at
//                budget eps - 1 for sensitivity floor(delta / hole_r) and
//                Y ~ DLap(1 / hole_r) fills the gaps the scaling leaves.
//                Requires eps >= 2 so the smoothing budget of 1 fits.
//
// The total privacy budget is eps in every configuration.
class MsdLapParams {
 public:
  // Plain mechanism over scales {1..delta}, or its smoothed variant when
  // hole_r >= 1.
  static MsdLapParams Contiguous(const Rational& eps, std::uint64_t delta,
                                 std::uint64_t hole_r = 0);

  // Difference-set variant: scales are exactly the realizable query gaps.
  static MsdLapParams FromScales(const Rational& eps,
                                 std::vector<std::uint64_t> scales);

  const Rational& eps() const { return eps_; }
  std::uint64_t delta() const { return delta_; }
  std::uint64_t hole_r() const { return hole_r_; }

  // The scale set the outer sum ranges over.  For hole_r >= 1 these are the
  // *inner* mechanism's scales {1..floor(delta/hole_r)}, already reduced.
  const std::vector<std::uint64_t>& scales() const { return scales_; }

  // Per-scale DLap rate: eps for hole_r = 0, eps - 1 for hole_r >= 1.
  Rational ScaleRate() const {
    return hole_r_ == 0 ? eps_ : eps_ - Rational(1);
  }

 private:
  MsdLapParams() = default;

  Rational eps_;
  std::uint64_t delta_ = 0;
  std::uint64_t hole_r_ = 0;
  std::vector<std::uint64_t> scales_;
};

// Symmetric Dirichlet-multinomial DirM(n, {alpha, ..., alpha}) over k
// variates: a multinomial whose probability vector is Dirichlet(alpha)
// distributed, sampled by a Polya urn.
struct DirMParams {
  std::uint64_t n;  // total count to distribute
  std::uint64_t k;  // number of variates
  Rational alpha;   // shared concentration

  DirMParams(std::uint64_t n_in, std::uint64_t k_in, Rational alpha_in)
      : n(n_in), k(k_in), alpha(std::move(alpha_in)) {
    Require(k >= 1, "DirMParams: need at least one variate");
    Require(alpha.Sign() > 0, "DirMParams: alpha must be positive");
  }
};

// Sparse nonnegative counts keyed by 1-based variate index; zero entries are
// never stored.
using SparseCounts = std::map<std::uint64_t, std::uint64_t>;

// Tagged parameter set for the univariate discrete distributions that the
// analysis and verification code handle generically.
using DiscreteDist = std::variant<NbParams, DLapParams, GdlParams, MsdLapParams>;

}  // namespace divnoise

#endif  // DIVNOISE_DISTRIBUTIONS_H_
