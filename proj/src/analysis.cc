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

#include "divnoise/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "divnoise/errors.h"

namespace divnoise {

namespace {

constexpr double kSeriesRelTol = 1e-15;
constexpr int kSeriesMaxTerms = 1000000;
// Rescale threshold for the log-domain hypergeometric summation.
constexpr double kRescaleAt = 1e280;

bool IsNonPositiveInteger(double x) {
  return x <= 0.0 && x == std::floor(x);
}

}  // namespace

double LnGamma(double x) {
  Require(!IsNonPositiveInteger(x), "LnGamma: pole at non-positive integer");
  return std::lgamma(x);
}

double Pochhammer(double x, unsigned n) {
  if (n == 0) return 1.0;
  if (n <= 64) {
    double product = 1.0;
    for (unsigned i = 0; i < n; ++i) product *= x + i;
    return product;
  }
  Require(x > 0.0, "Pochhammer: large-n path requires x > 0");
  return std::exp(LnGamma(x + n) - LnGamma(x));
}

namespace {

// Shared series core: returns ln of sum_{s>=0} (a)_s (b)_s / ((c)_s s!) z^s.
// The partial sum is rescaled whenever it grows past kRescaleAt, so the
// result stays finite for parameter ranges where the series itself
// overflows.  All series arguments in this artifact have positive terms
// (a, b, c > 0 and 0 <= z < 1), which makes the truncation bound safe: once
// the term ratio q = t_{s+1}/t_s falls below 1, the tail is at most
// t_s q/(1-q), a geometric bound.
double LogHyp2f1Core(double a, double b, double c, double z) {
  Require(z >= 0.0 && z < 1.0, "Hyp2f1: z must lie in [0, 1)");
  Require(!IsNonPositiveInteger(c), "Hyp2f1: c must not be a non-positive integer");
  if (z == 0.0) return 0.0;
  double log_scale = 0.0;
  double sum = 1.0;   // s = 0 term
  double term = 1.0;
  for (int s = 0; s < kSeriesMaxTerms; ++s) {
    double ratio = (a + s) * (b + s) / ((c + s) * (s + 1.0)) * z;
    term *= ratio;
    sum += term;
    if (sum > kRescaleAt) {
      sum /= kRescaleAt;
      term /= kRescaleAt;
      log_scale += std::log(kRescaleAt);
    }
    // The rational prefactor of the term ratio tends monotonically to 1, so
    // every later ratio is bounded by max(current ratio, z); the remaining
    // tail is geometric under that bound.
    double q = std::max(ratio, z);
    if (q < 1.0 && term * q / (1.0 - q) < kSeriesRelTol * sum) {
      return std::log(sum) + log_scale;
    }
  }
  throw NumericError("Hyp2f1: series did not converge within term budget");
}

}  // namespace

double LogHyp2f1(double a, double b, double c, double z) {
  Require(a > 0.0 && b > 0.0 && c > 0.0,
          "LogHyp2f1: supported for positive parameters only");
  return LogHyp2f1Core(a, b, c, z);
}

double Hyp2f1(double a, double b, double c, double z) {
  Require(a > 0.0 && b > 0.0 && c > 0.0,
          "Hyp2f1: supported for positive parameters only");
  double log_value = LogHyp2f1Core(a, b, c, z);
  Require(log_value < 700.0, "Hyp2f1: value overflows double; use LogHyp2f1");
  return std::exp(log_value);
}

// ---------------------------------------------------------------------------
// PMFs.

double NbPmf(double r, double p, std::int64_t k) {
  Require(r > 0.0, "NbPmf: r must be positive");
  Require(p > 0.0 && p < 1.0, "NbPmf: p must lie in (0, 1)");
  if (k < 0) return 0.0;
  double kd = static_cast<double>(k);
  double log_pmf = LnGamma(r + kd) - LnGamma(r) - LnGamma(kd + 1.0) +
                   r * std::log(p) + kd * std::log1p(-p);
  return std::exp(log_pmf);
}

double DLapPmf(double a, std::int64_t k) {
  Require(a > 0.0, "DLapPmf: scale must be positive");
  double kd = std::abs(static_cast<double>(k));
  return std::tanh(a / 2.0) * std::exp(-a * kd);
}

double GdlPmf(double beta, double a, std::int64_t k) {
  Require(beta > 0.0, "GdlPmf: beta must be positive");
  Require(a > 0.0, "GdlPmf: a must be positive");
  double kd = std::abs(static_cast<double>(k));
  double z = std::exp(-2.0 * a);
  double log_pmf = -a * kd + 2.0 * beta * std::log(-std::expm1(-a)) +
                   LogHyp2f1(beta, beta + kd, 1.0 + kd, z) +
                   LnGamma(beta + kd) - LnGamma(1.0 + kd) - LnGamma(beta);
  return std::exp(log_pmf);
}

namespace {

// Symmetric geometric-tail truncation radius for DLap(a) at scale `scale`:
// the smallest R (in unscaled units) with 2 sum_{k>R} f_DLap(k) <= budget.
// Tail identity: 2 tanh(a/2) e^{-a(R+1)} / (1 - e^{-a}).
std::int64_t DLapTruncationRadius(double a, double budget) {
  double log_tail_const =
      std::log(2.0 * std::tanh(a / 2.0)) - std::log1p(-std::exp(-a));
  // Solve e^{-a(R+1)} <= budget / tail_const.
  double rhs = std::log(budget) - log_tail_const;
  double radius = -rhs / a - 1.0;
  std::int64_t r = static_cast<std::int64_t>(std::ceil(std::max(radius, 0.0)));
  return r + 1;  // one extra step of slack
}

// Dense symmetric PMF of DLap(a) stretched by `scale`.
PmfTable DLapTable(double a, std::int64_t scale, double budget) {
  std::int64_t radius = DLapTruncationRadius(a, budget);
  PmfTable table;
  table.min_value = -radius * scale;
  table.tail_bound = budget;
  table.probs.assign(static_cast<std::size_t>(2 * radius * scale + 1), 0.0);
  for (std::int64_t k = -radius; k <= radius; ++k) {
    table.probs[static_cast<std::size_t>((k + radius) * scale)] =
        DLapPmf(a, k);
  }
  return table;
}

// Convolution of two dense tables.
PmfTable Convolve(const PmfTable& f, const PmfTable& g) {
  PmfTable out;
  out.min_value = f.min_value + g.min_value;
  out.tail_bound = f.tail_bound + g.tail_bound;
  out.probs.assign(f.probs.size() + g.probs.size() - 1, 0.0);
  for (std::size_t i = 0; i < f.probs.size(); ++i) {
    if (f.probs[i] == 0.0) continue;
    for (std::size_t j = 0; j < g.probs.size(); ++j) {
      out.probs[i + j] += f.probs[i] * g.probs[j];
    }
  }
  return out;
}

}  // namespace

PmfTable BuildMsdLapPmfTable(const MsdLapParams& params, double tail_bound) {
  Require(tail_bound > 0.0, "BuildMsdLapPmfTable: tail bound must be positive");
  double rate = params.ScaleRate().ToDouble();
  std::size_t pieces = params.scales().size() + (params.hole_r() >= 1 ? 1 : 0);
  // Truncating a piece robs mass from every cell of the convolution, not just
  // from beyond the window: a cell of size comparable to the piece budget can
  // lose most of its value.  Build the pieces sixteen orders tighter than the
  // requested bound so that any cell at or above tail_bound is also accurate
  // to near machine precision, and report the tighter bound actually achieved.
  constexpr double kPieceSlack = 1e-16;
  double budget = tail_bound * kPieceSlack / static_cast<double>(pieces);

  PmfTable acc;
  bool first = true;
  for (std::uint64_t scale : params.scales()) {
    PmfTable piece = DLapTable(rate, static_cast<std::int64_t>(scale), budget);
    acc = first ? piece : Convolve(acc, piece);
    first = false;
  }
  if (params.hole_r() >= 1) {
    // The scaled sum sits on hole_r * Z; stretch it, then add the
    // gap-filling DLap(1/hole_r).
    std::int64_t r = static_cast<std::int64_t>(params.hole_r());
    PmfTable stretched;
    stretched.min_value = acc.min_value * r;
    stretched.tail_bound = acc.tail_bound;
    stretched.probs.assign((acc.probs.size() - 1) * r + 1, 0.0);
    for (std::size_t i = 0; i < acc.probs.size(); ++i) {
      stretched.probs[i * static_cast<std::size_t>(r)] = acc.probs[i];
    }
    PmfTable hole = DLapTable(1.0 / static_cast<double>(params.hole_r()),
                              /*scale=*/1, budget);
    acc = Convolve(stretched, hole);
  }
  return acc;
}

namespace {

PmfTable BuildNbTable(const NbParams& params, double tail_bound) {
  double r = params.r.ToDouble();
  double p = params.p.ApproxDouble();
  PmfTable table;
  table.min_value = 0;
  table.tail_bound = tail_bound;
  double cum = 0.0;
  // Mean + geometric cushion; extend until the accumulated mass covers all
  // but tail_bound.
  for (std::int64_t k = 0;; ++k) {
    double f = NbPmf(r, p, k);
    table.probs.push_back(f);
    cum += f;
    if (1.0 - cum <= tail_bound && k > 2) break;
    Require(k < (1 << 26), "BuildPmfTable: NB support too wide to tabulate");
  }
  return table;
}

PmfTable BuildSymmetricTable(double (*pmf)(double, double, std::int64_t),
                             double arg0, double arg1, double tail_bound) {
  // Accumulate outward until the two-sided tail is below tail_bound.
  std::vector<double> half;
  double cum = 0.0;
  std::int64_t radius = 0;
  for (std::int64_t k = 0;; ++k) {
    double f = pmf(arg0, arg1, k);
    half.push_back(f);
    cum += (k == 0) ? f : 2.0 * f;
    if (1.0 - cum <= tail_bound && k > 2) {
      radius = k;
      break;
    }
    Require(k < (1 << 26), "BuildPmfTable: support too wide to tabulate");
  }
  PmfTable table;
  table.min_value = -radius;
  table.tail_bound = tail_bound;
  table.probs.assign(static_cast<std::size_t>(2 * radius + 1), 0.0);
  for (std::int64_t k = -radius; k <= radius; ++k) {
    table.probs[static_cast<std::size_t>(k + radius)] =
        half[static_cast<std::size_t>(std::abs(k))];
  }
  return table;
}

double DLapPmfAdapter(double a, double /*unused*/, std::int64_t k) {
  return DLapPmf(a, k);
}

}  // namespace

PmfTable BuildPmfTable(const DiscreteDist& dist, double tail_bound) {
  return std::visit(
      [&](const auto& params) -> PmfTable {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, NbParams>) {
          return BuildNbTable(params, tail_bound);
        } else if constexpr (std::is_same_v<T, DLapParams>) {
          return BuildSymmetricTable(&DLapPmfAdapter, params.a.ToDouble(), 0.0,
                                     tail_bound);
        } else if constexpr (std::is_same_v<T, GdlParams>) {
          return BuildSymmetricTable(&GdlPmf, params.beta.ToDouble(),
                                     params.a.ToDouble(), tail_bound);
        } else {
          return BuildMsdLapPmfTable(params, tail_bound);
        }
      },
      dist);
}

double Pmf(const DiscreteDist& dist, std::int64_t k) {
  return std::visit(
      [&](const auto& params) -> double {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, NbParams>) {
          return NbPmf(params.r.ToDouble(), params.p.ApproxDouble(), k);
        } else if constexpr (std::is_same_v<T, DLapParams>) {
          return DLapPmf(params.a.ToDouble(), k);
        } else if constexpr (std::is_same_v<T, GdlParams>) {
          return GdlPmf(params.beta.ToDouble(), params.a.ToDouble(), k);
        } else {
          return BuildMsdLapPmfTable(params).At(k);
        }
      },
      dist);
}

// ---------------------------------------------------------------------------
// Privacy accountants.

PrivacyBound GdlEpsilon(double beta, double a, std::uint64_t delta) {
  Require(beta > 0.0, "GdlEpsilon: beta must be positive");
  Require(a > 0.0, "GdlEpsilon: a must be positive");
  Require(delta >= 1, "GdlEpsilon: delta must be >= 1");
  double d = static_cast<double>(delta);
  PrivacyBound bound;
  bound.eps_simplified = a * d + std::log(d / beta);
  bound.eps_wendel =
      a * d + (1.0 - beta) * std::log(beta + d) + LnGamma(beta);
  if (beta >= 1.0) {
    bound.method = PrivacyMethod::kPostprocessingDLap;
    bound.eps = a * d;
    return bound;
  }
  bound.method = PrivacyMethod::kExactHypergeometric;
  double z = std::exp(-2.0 * a);
  double log_ratio = LogHyp2f1(beta, beta, 1.0, z) -
                     LogHyp2f1(beta, beta + d, 1.0 + d, z);
  bound.eps_exact = a * d + log_ratio + LnGamma(d + 1.0) + LnGamma(beta) -
                    LnGamma(beta + d);
  bound.eps = *bound.eps_exact;
  return bound;
}

PrivacyBound GdlEpsilon(const GdlParams& params, std::uint64_t delta) {
  return GdlEpsilon(params.beta.ToDouble(), params.a.ToDouble(), delta);
}

double MsdLapEpsilon(const MsdLapParams& params) {
  double eps = params.eps().ToDouble();
  if (params.hole_r() >= 1) {
    // Unit budget for the gap-filling DLap(1/r), eps - 1 for the scales.
    return 1.0 + (eps - 1.0);
  }
  return eps;
}

// ---------------------------------------------------------------------------
// Calibration.

GdlParams CalibrateGdl(double eps, std::uint64_t delta) {
  Require(delta >= 1, "CalibrateGdl: delta must be >= 1");
  double d = static_cast<double>(delta);
  Require(eps > 2.0 + std::log(d),
          "CalibrateGdl: requires eps > 2 + ln(delta)");
  double beta = d * std::exp(2.0 - eps);
  return GdlParams(Rational::FromDouble(beta),
                   Rational(2, static_cast<std::int64_t>(delta)));
}

double CalibratedGdlVariance(double eps, std::uint64_t delta) {
  Require(delta >= 1, "CalibratedGdlVariance: delta must be >= 1");
  double d = static_cast<double>(delta);
  Require(eps > 2.0 + std::log(d),
          "CalibratedGdlVariance: requires eps > 2 + ln(delta)");
  return d * std::exp(2.0 - eps) / (std::cosh(2.0 / d) - 1.0);
}

std::uint64_t ChooseHoleR(double eps, std::uint64_t delta) {
  Require(eps >= 2.0, "ChooseHoleR: requires eps >= 2");
  Require(delta >= 1, "ChooseHoleR: delta must be >= 1");
  double d = static_cast<double>(delta);
  std::uint64_t candidate = static_cast<std::uint64_t>(
      std::min(d, std::ceil(std::exp(-eps / 3.0) * d)));
  Rational eps_rational = Rational::FromDouble(eps);
  double var_plain =
      MsdLapVariance(MsdLapParams::Contiguous(eps_rational, delta, 0));
  double var_smoothed =
      MsdLapVariance(MsdLapParams::Contiguous(eps_rational, delta, candidate));
  // Prefer the smaller r on ties (fewer smoothing artifacts).
  return var_plain <= var_smoothed ? 0 : candidate;
}

ContinuousParams CalibrateContinuous(const Rational& eps, double sensitivity) {
  Require(eps >= Rational(2), "CalibrateContinuous: requires eps >= 2");
  Require(sensitivity > 0.0,
          "CalibrateContinuous: sensitivity must be positive");
  double eps_d = eps.ToDouble();
  ContinuousParams params;
  params.eps = eps;
  params.sensitivity = sensitivity;
  params.delta_d = static_cast<std::uint64_t>(std::ceil(std::exp(eps_d / 3.0)));
  params.hole_width = 1.0 / static_cast<double>(params.delta_d);
  double r = params.hole_width;
  double var_inner = MsdLapVariance(params.Inner());
  // Lap(r/2) contributes 2 (r/2)^2 = r^2 / 2.
  params.variance =
      sensitivity * sensitivity * (r * r * var_inner + r * r / 2.0);
  return params;
}

// ---------------------------------------------------------------------------
// Variances.

double NbVariance(double r, double p) {
  Require(r > 0.0 && p > 0.0 && p < 1.0, "NbVariance: invalid parameters");
  return r * (1.0 - p) / (p * p);
}

double DLapVariance(double a) {
  Require(a > 0.0, "DLapVariance: scale must be positive");
  return 1.0 / (std::cosh(a) - 1.0);
}

double GdlVariance(double beta, double a) {
  Require(beta > 0.0 && a > 0.0, "GdlVariance: invalid parameters");
  return beta / (std::cosh(a) - 1.0);
}

double MsdLapVariance(const MsdLapParams& params) {
  double rate = params.ScaleRate().ToDouble();
  double sum_sq = 0.0;
  for (std::uint64_t scale : params.scales()) {
    double s = static_cast<double>(scale);
    sum_sq += s * s;
  }
  double var_scales = sum_sq * DLapVariance(rate);
  if (params.hole_r() >= 1) {
    double r = static_cast<double>(params.hole_r());
    return r * r * var_scales + DLapVariance(1.0 / r);
  }
  return var_scales;
}

double Variance(const DiscreteDist& dist) {
  return std::visit(
      [](const auto& params) -> double {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, NbParams>) {
          return NbVariance(params.r.ToDouble(), params.p.ApproxDouble());
        } else if constexpr (std::is_same_v<T, DLapParams>) {
          return DLapVariance(params.a.ToDouble());
        } else if constexpr (std::is_same_v<T, GdlParams>) {
          return GdlVariance(params.beta.ToDouble(), params.a.ToDouble());
        } else {
          return MsdLapVariance(params);
        }
      },
      dist);
}

// ---------------------------------------------------------------------------
// Discrete staircase.

namespace {

double StaircaseNormalizer(const StaircaseParams& params) {
  double b = std::exp(-params.eps);
  double r = static_cast<double>(params.r);
  double d = static_cast<double>(params.delta);
  return (1.0 - b) / (2.0 * r + 2.0 * b * (d - r) - (1.0 - b));
}

void ValidateStaircase(const StaircaseParams& params) {
  Require(params.delta >= 1, "Staircase: delta must be >= 1");
  Require(params.r >= 1 && params.r <= params.delta,
          "Staircase: r must lie in {1..delta}");
  Require(params.eps > 0.0, "Staircase: eps must be positive");
}

}  // namespace

double StaircasePmf(const StaircaseParams& params, std::int64_t i) {
  ValidateStaircase(params);
  double a = StaircaseNormalizer(params);
  double b = std::exp(-params.eps);
  std::uint64_t mag = static_cast<std::uint64_t>(i < 0 ? -i : i);
  std::uint64_t k = mag / params.delta;
  std::uint64_t j = mag % params.delta;
  double level = a * std::pow(b, static_cast<double>(k));
  return j < params.r ? level : level * b;
}

double StaircaseVariance(const StaircaseParams& params) {
  ValidateStaircase(params);
  double e = std::exp(params.eps);
  double z = e - 1.0;
  double r = static_cast<double>(params.r);
  double d = static_cast<double>(params.delta);
  double x1 = 2.0 * r * r * r * z * z * z -
              3.0 * r * r * z * z * (z - 2.0 * d);
  double x2 = r * z *
              (1.0 + e * e + 6.0 * d * (1.0 + d) +
               e * (6.0 * d * (d - 1.0) - 2.0));
  double x3 = 2.0 * e * d *
              (-1.0 + 4.0 * d * d + std::cosh(params.eps) +
               2.0 * d * d * std::cosh(params.eps) -
               3.0 * d * std::sinh(params.eps));
  double denom = 3.0 * z * z * (1.0 - 2.0 * r + e * (2.0 * r - 1.0) + 2.0 * d);
  return (x1 + x2 + x3) / denom;
}

double StaircaseVarianceLowerBound(double eps, std::uint64_t delta) {
  Require(delta >= 1, "StaircaseVarianceLowerBound: delta must be >= 1");
  double d = static_cast<double>(delta);
  double mass = d * (d + 1.0) * (2.0 * d + 1.0);
  Require(eps >= std::log(mass / 2.0),
          "StaircaseVarianceLowerBound: requires eps >= ln(D(D+1)(2D+1)/2)");
  return mass / (3.0 * (std::exp(eps) + 2.0 * d - 1.0));
}

std::uint64_t StaircaseBestR(double eps, std::uint64_t delta) {
  Require(delta >= 1, "StaircaseBestR: delta must be >= 1");
  std::uint64_t best_r = 1;
  double best_var = std::numeric_limits<double>::infinity();
  for (std::uint64_t r = 1; r <= delta; ++r) {
    double var = StaircaseVariance({r, eps, delta});
    if (var < best_var) {
      best_var = var;
      best_r = r;
    }
  }
  return best_r;
}

double OptimalStaircaseVariance(double eps, std::uint64_t delta) {
  return StaircaseVariance({StaircaseBestR(eps, delta), eps, delta});
}

// ---------------------------------------------------------------------------
// Shape checks.

LogConvexityReport CheckLogConvexity(const GdlParams& params,
                                     std::uint64_t radius,
                                     std::uint64_t delta) {
  double beta = params.beta.ToDouble();
  double a = params.a.ToDouble();
  Require(beta > 0.0 && beta < 1.0,
          "CheckLogConvexity: requires beta in (0, 1)");
  Require(radius >= delta + 2, "CheckLogConvexity: radius too small");

  std::vector<double> pmf(radius + 3);
  for (std::uint64_t k = 0; k < pmf.size(); ++k) {
    pmf[k] = GdlPmf(beta, a, static_cast<std::int64_t>(k));
  }

  LogConvexityReport report;
  report.decreasing = true;
  report.log_convex = true;
  report.worst_margin = std::numeric_limits<double>::infinity();
  // Margins are normalized so slack remains comparable deep in the tail;
  // both checks tolerate -1e-12 of floating-point noise.
  constexpr double kMarginTol = -1e-12;
  for (std::uint64_t k = 0; k <= radius; ++k) {
    double decrease_margin = (pmf[k] - pmf[k + 1]) / pmf[k];
    if (decrease_margin < kMarginTol) report.decreasing = false;
    double convexity = pmf[k] * pmf[k + 2] - pmf[k + 1] * pmf[k + 1];
    double convexity_margin = convexity / (pmf[k + 1] * pmf[k + 1]);
    if (convexity_margin < kMarginTol) report.log_convex = false;
    report.worst_margin =
        std::min({report.worst_margin, decrease_margin, convexity_margin});
  }

  // Worst log ratio of a shifted PMF against the original, over shifts
  // |xi| <= delta and positions within the scanned window.  By symmetry and
  // monotonicity this should be attained at the endpoint pair (delta, 0).
  double max_ratio = -std::numeric_limits<double>::infinity();
  std::int64_t window = static_cast<std::int64_t>(radius - delta);
  auto at = [&](std::int64_t k) {
    return pmf[static_cast<std::size_t>(std::llabs(k))];
  };
  for (std::int64_t xi = -static_cast<std::int64_t>(delta);
       xi <= static_cast<std::int64_t>(delta); ++xi) {
    if (xi == 0) continue;
    for (std::int64_t k = -window; k <= window; ++k) {
      max_ratio = std::max(max_ratio, std::log(at(k - xi) / at(k)));
    }
  }
  report.max_log_ratio = max_ratio;
  report.direct_log_ratio =
      std::log(pmf[0] / pmf[static_cast<std::size_t>(delta)]);
  return report;
}

}  // namespace divnoise
