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

#include "divnoise/verify.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "divnoise/analysis.h"
#include "divnoise/distributed.h"
#include "divnoise/errors.h"
#include "divnoise/exact_rand.h"
#include "divnoise/rng.h"
#include "divnoise/samplers.h"
#include "divnoise/shuffle.h"
#include "json.hpp"

namespace divnoise {
namespace {

constexpr double kPValueFloor = 0.001;
constexpr std::int64_t kMaxSupportWidth = std::int64_t{1} << 22;

double ChiSquareSurvival(double statistic, std::uint64_t dof) {
  if (dof == 0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(dof) / 2.0,
                              statistic / 2.0);
}

// Mass of the PMF from `start` walking in direction `step`, summed until the
// terms stay negligible (our laws all have at-worst-geometric tails).
double TailMass(const std::function<double(std::int64_t)>& pmf,
                std::int64_t start, int step) {
  double total = 0.0;
  int tiny_run = 0;
  std::int64_t k = start;
  for (int i = 0; i < 100000 && tiny_run < 16; ++i, k += step) {
    const double f = pmf(k);
    total += f;
    if (f < 1e-17) {
      ++tiny_run;
    } else {
      tiny_run = 0;
    }
  }
  return total;
}

// Contiguous [begin, end) cell ranges whose expected counts each reach
// min_expected: one bin grown from each tail inward, then a left-to-right
// sweep over the middle with any underfull remainder merged into the
// preceding bin.  Interior zero-expectation cells (lattice laws) are
// absorbed by whichever bin is open when the sweep passes them.
std::vector<std::pair<std::size_t, std::size_t>> MergeBinRanges(
    const std::vector<double>& expected, double min_expected) {
  const std::size_t n = expected.size();
  std::size_t left_end = 0;
  double acc = 0.0;
  while (left_end < n && acc < min_expected) {
    acc += expected[left_end];
    ++left_end;
  }
  std::size_t right_begin = n;
  acc = 0.0;
  while (right_begin > left_end && acc < min_expected) {
    --right_begin;
    acc += expected[right_begin];
  }
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  ranges.emplace_back(0, left_end);
  std::size_t open = left_end;
  acc = 0.0;
  for (std::size_t i = left_end; i < right_begin; ++i) {
    acc += expected[i];
    if (acc >= min_expected) {
      ranges.emplace_back(open, i + 1);
      open = i + 1;
      acc = 0.0;
    }
  }
  if (open < right_begin) {
    ranges.back().second = right_begin;  // fold the underfull remainder
  }
  if (right_begin < n) ranges.emplace_back(right_begin, n);
  return ranges;
}

GofReport FinishChiSquare(
    const std::vector<double>& observed, const std::vector<double>& expected,
    double min_expected, std::uint64_t n_samples, std::int64_t support_lo,
    std::int64_t support_hi) {
  const auto ranges = MergeBinRanges(expected, min_expected);
  Require(ranges.size() >= 2, "chi-square: degenerate single-bin support");
  double statistic = 0.0;
  for (const auto& [begin, end] : ranges) {
    double o = 0.0;
    double e = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      o += observed[i];
      e += expected[i];
    }
    statistic += (o - e) * (o - e) / e;
  }
  GofReport report;
  report.statistic = statistic;
  report.dof = ranges.size() - 1;
  report.p_value = ChiSquareSurvival(statistic, report.dof);
  report.n_samples = n_samples;
  report.n_bins = ranges.size();
  report.support_lo = support_lo;
  report.support_hi = support_hi;
  return report;
}

}  // namespace

GofReport ChiSquareFit(const std::vector<std::int64_t>& samples,
                       const std::function<double(std::int64_t)>& pmf,
                       double min_expected) {
  Require(samples.size() >= 1000, "ChiSquareFit: need at least 1000 samples");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(),
                                                  samples.end());
  const std::int64_t lo = *lo_it;
  const std::int64_t hi = *hi_it;
  Require(hi - lo < kMaxSupportWidth, "ChiSquareFit: support too wide");
  const std::size_t width = static_cast<std::size_t>(hi - lo) + 1;
  const double n = static_cast<double>(samples.size());
  std::vector<double> observed(width, 0.0);
  for (const std::int64_t s : samples) {
    observed[static_cast<std::size_t>(s - lo)] += 1.0;
  }
  std::vector<double> expected(width, 0.0);
  for (std::size_t i = 0; i < width; ++i) {
    expected[i] = n * pmf(lo + static_cast<std::int64_t>(i));
  }
  // Fold the out-of-range mass into the extreme cells so expecteds sum to n.
  expected.front() += n * TailMass(pmf, lo - 1, -1);
  expected.back() += n * TailMass(pmf, hi + 1, +1);
  return FinishChiSquare(observed, expected, min_expected, samples.size(), lo,
                         hi);
}

GofReport ChiSquareTwoSample(const std::vector<std::int64_t>& a,
                             const std::vector<std::int64_t>& b,
                             double min_expected) {
  Require(a.size() >= 1000 && b.size() >= 1000,
          "ChiSquareTwoSample: need at least 1000 samples per set");
  const auto [a_lo, a_hi] = std::minmax_element(a.begin(), a.end());
  const auto [b_lo, b_hi] = std::minmax_element(b.begin(), b.end());
  const std::int64_t lo = std::min(*a_lo, *b_lo);
  const std::int64_t hi = std::max(*a_hi, *b_hi);
  Require(hi - lo < kMaxSupportWidth, "ChiSquareTwoSample: support too wide");
  const std::size_t width = static_cast<std::size_t>(hi - lo) + 1;
  std::vector<double> count_a(width, 0.0);
  std::vector<double> count_b(width, 0.0);
  for (const std::int64_t s : a) count_a[s - lo] += 1.0;
  for (const std::int64_t s : b) count_b[s - lo] += 1.0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  // Expected under homogeneity: each set gets its share of the pooled cell.
  std::vector<double> pooled(width, 0.0);
  for (std::size_t i = 0; i < width; ++i) {
    pooled[i] = count_a[i] + count_b[i];
  }
  // Merge on the smaller expected share so both sets clear min_expected.
  const double share = std::min(na, nb) / (na + nb);
  std::vector<double> merge_key(width, 0.0);
  for (std::size_t i = 0; i < width; ++i) merge_key[i] = pooled[i] * share;
  const auto ranges = MergeBinRanges(merge_key, min_expected);
  Require(ranges.size() >= 2,
          "ChiSquareTwoSample: degenerate single-bin support");
  double statistic = 0.0;
  for (const auto& [begin, end] : ranges) {
    double oa = 0.0;
    double ob = 0.0;
    double pool = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      oa += count_a[i];
      ob += count_b[i];
      pool += pooled[i];
    }
    const double ea = pool * na / (na + nb);
    const double eb = pool * nb / (na + nb);
    statistic += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
  }
  GofReport report;
  report.statistic = statistic;
  report.dof = ranges.size() - 1;
  report.p_value = ChiSquareSurvival(statistic, report.dof);
  report.n_samples = a.size() + b.size();
  report.n_bins = ranges.size();
  report.support_lo = lo;
  report.support_hi = hi;
  return report;
}

VarianceReport VarianceZTest(const std::vector<double>& samples,
                             double analytic_variance) {
  Require(samples.size() >= 10000,
          "VarianceZTest: need at least 10^4 samples");
  const double n = static_cast<double>(samples.size());
  double m2 = 0.0;
  double m4 = 0.0;
  for (const double x : samples) {
    const double x2 = x * x;
    m2 += x2;
    m4 += x2 * x2;
  }
  m2 /= n;
  m4 /= n;
  VarianceReport report;
  report.empirical = m2;
  report.analytic = analytic_variance;
  report.n_samples = samples.size();
  report.std_error = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
  if (report.std_error == 0.0) {
    report.z_score = (m2 == analytic_variance)
                         ? 0.0
                         : std::numeric_limits<double>::infinity();
  } else {
    report.z_score = (m2 - analytic_variance) / report.std_error;
  }
  report.pass = std::abs(report.z_score) < 4.0;
  return report;
}

EpsilonScanReport EpsilonScan(const DiscreteDist& dist, std::uint64_t delta) {
  Require(delta >= 1, "EpsilonScan: delta must be at least 1");
  // A truncated convolution only underestimates, and near the window edge the
  // computed cells can be off by many orders of magnitude (the wide-scale
  // pieces run out first, so the edge decays at the narrowest piece's rate).
  // Restricting ratios to cells at or above kScanFloor caps the worst-case
  // relative truncation error of every qualifying cell at
  // tail_bound / kScanFloor, so each retained log ratio is accurate to a few
  // ulps; cells below the floor carry no usable likelihood information.
  constexpr double kScanFloor = 1e-14;
  const PmfTable table = BuildPmfTable(dist, 1e-14);
  const std::int64_t lo = table.min_value;
  const std::int64_t hi = table.max_value();
  const std::int64_t shift_bound = static_cast<std::int64_t>(delta);
  EpsilonScanReport report;
  report.tail_bound = table.tail_bound;
  report.max_log_ratio = -std::numeric_limits<double>::infinity();
  const double floor = kScanFloor;
  // Interior maximum over points at least 8 cells from the window edges:
  // if it matches the full maximum, enlarging the window cannot raise the
  // result by more than the matching tolerance.
  double interior_max = -std::numeric_limits<double>::infinity();
  for (std::int64_t shift = -shift_bound; shift <= shift_bound; ++shift) {
    if (shift == 0) continue;
    const std::int64_t k_begin = std::max(lo, lo + shift);
    const std::int64_t k_end = std::min(hi, hi + shift);
    for (std::int64_t k = k_begin; k <= k_end; ++k) {
      const double denom = table.At(k);
      const double numer = table.At(k - shift);
      if (denom <= floor || numer <= floor) continue;
      const double log_ratio = std::log(numer) - std::log(denom);
      if (log_ratio > report.max_log_ratio) {
        report.max_log_ratio = log_ratio;
        report.worst_shift = shift;
        report.worst_point = k;
      }
      if (k >= lo + 8 && k <= hi - 8 && k - shift >= lo + 8 &&
          k - shift <= hi - 8 && log_ratio > interior_max) {
        interior_max = log_ratio;
      }
    }
  }
  Require(std::isfinite(report.max_log_ratio),
          "EpsilonScan: no comparable support points");
  report.radius_sufficient =
      report.max_log_ratio - interior_max <= 1e-9;
  return report;
}

double GdlPmfConvOracle(double beta, double a, std::int64_t k) {
  Require(beta > 0.0 && a > 0.0, "GdlPmfConvOracle: invalid parameters");
  const double p = -std::expm1(-a);
  const std::int64_t mag = k < 0 ? -k : k;
  double total = 0.0;
  for (std::int64_t j = 0; j < (std::int64_t{1} << 26); ++j) {
    const double term = NbPmf(beta, p, j) * NbPmf(beta, p, j + mag);
    total += term;
    if (j >= 8 && term < total * 1e-18) return total;
  }
  throw NumericError("GdlPmfConvOracle: series did not converge");
}

double BruteVariance(const std::function<double(std::int64_t)>& pmf,
                     std::int64_t radius) {
  Require(radius >= 1, "BruteVariance: radius must be positive");
  double total = 0.0;
  for (std::int64_t k = -radius; k <= radius; ++k) {
    total += static_cast<double>(k) * static_cast<double>(k) * pmf(k);
  }
  return total;
}

// ---------------------------------------------------------------------------
// The wired-in suite.

namespace {

constexpr std::size_t kGofSamples = 100000;
constexpr std::size_t kClosureSamples = 50000;

struct Suite {
  explicit Suite(std::uint64_t seed) : root(seed) {}

  RngStream NextStream() { return root.Derive(next_id++); }

  void Add(std::string name, std::string params, double statistic,
           bool pass) {
    report.checks.push_back(
        {std::move(name), std::move(params), statistic, pass});
  }

  RngStream root;
  std::uint64_t next_id = 1;
  SuiteReport report;
};

template <typename Sampler>
std::vector<std::int64_t> DrawMany(RngStream& rng, std::size_t n,
                                   Sampler&& sample) {
  std::vector<std::int64_t> out(n);
  for (auto& value : out) value = sample(rng);
  return out;
}

std::vector<double> AsDoubles(const std::vector<std::int64_t>& values) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = static_cast<double>(values[i]);
  }
  return out;
}

void GofCheck(Suite& suite, const std::string& name,
              const std::string& params,
              const std::vector<std::int64_t>& samples,
              const std::function<double(std::int64_t)>& pmf) {
  const GofReport gof = ChiSquareFit(samples, pmf);
  suite.Add("gof/" + name, params, gof.p_value,
            gof.p_value > kPValueFloor);
}

void VarCheck(Suite& suite, const std::string& name,
              const std::string& params,
              const std::vector<std::int64_t>& samples, double analytic) {
  const VarianceReport var = VarianceZTest(AsDoubles(samples), analytic);
  suite.Add("var/" + name, params, var.z_score, var.pass);
}

double BetaBinomialPmf(std::uint64_t n, double alpha, double beta,
                       std::int64_t j) {
  if (j < 0 || j > static_cast<std::int64_t>(n)) return 0.0;
  const double nd = static_cast<double>(n);
  const double jd = static_cast<double>(j);
  const double log_choose =
      LnGamma(nd + 1.0) - LnGamma(jd + 1.0) - LnGamma(nd - jd + 1.0);
  const double log_beta_top = LnGamma(jd + alpha) + LnGamma(nd - jd + beta) -
                              LnGamma(nd + alpha + beta);
  const double log_beta_bottom =
      LnGamma(alpha) + LnGamma(beta) - LnGamma(alpha + beta);
  return std::exp(log_choose + log_beta_top - log_beta_bottom);
}

void AddSamplerChecks(Suite& suite) {
  // Exact primitives.
  {
    RngStream rng = suite.NextStream();
    const Rational gamma(1, 2);
    const auto samples = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return ToInt64(GeometricExpNeg(r, gamma));
    });
    const double p0 = -std::expm1(-0.5);
    GofCheck(suite, "geometric_exp", "gamma=1/2", samples,
             [p0](std::int64_t k) {
               return k < 0 ? 0.0
                            : p0 * std::exp(-0.5 * static_cast<double>(k));
             });
    VarCheck(suite, "geometric_exp", "gamma=1/2", samples,
             NbVariance(1.0, p0) + std::pow((1.0 - p0) / p0, 2));
  }
  {
    RngStream rng = suite.NextStream();
    const auto samples = DrawMany(rng, kGofSamples, [](RngStream& r) {
      return static_cast<std::int64_t>(UniformBelow(r, 37));
    });
    GofCheck(suite, "uniform_below", "bound=37", samples, [](std::int64_t k) {
      return (k >= 0 && k < 37) ? 1.0 / 37.0 : 0.0;
    });
  }
  {
    RngStream rng = suite.NextStream();
    const Rational gamma(3, 4);
    const auto samples = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return static_cast<std::int64_t>(BernoulliExpNeg(r, gamma));
    });
    const double p1 = std::exp(-0.75);
    GofCheck(suite, "bernoulli_exp_neg", "gamma=3/4", samples,
             [p1](std::int64_t k) {
               if (k == 1) return p1;
               if (k == 0) return 1.0 - p1;
               return 0.0;
             });
  }
  // Discrete Laplace.
  {
    RngStream rng = suite.NextStream();
    const DLapParams params{Rational(1)};
    const auto samples = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return SampleDLap(r, params);
    });
    GofCheck(suite, "dlap", "a=1", samples,
             [](std::int64_t k) { return DLapPmf(1.0, k); });
    VarCheck(suite, "dlap", "a=1", samples, DLapVariance(1.0));
  }
  {
    RngStream rng = suite.NextStream();
    const DLapParams params{Rational(1, 3)};
    const auto samples = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return SampleDLap(r, params);
    });
    GofCheck(suite, "dlap_wide", "a=1/3", samples,
             [](std::int64_t k) { return DLapPmf(1.0 / 3.0, k); });
  }
  // Negative binomial, all three samplers and all three probability forms.
  {
    RngStream rng = suite.NextStream();
    const NbParams params(Rational(3), TrialProb::Ratio(Rational(3, 10)));
    const auto samples = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return SampleNb(r, params);
    });
    GofCheck(suite, "nb_integer", "r=3 p=3/10", samples,
             [](std::int64_t k) { return NbPmf(3.0, 0.3, k); });
    VarCheck(suite, "nb_integer", "r=3 p=3/10", samples,
             NbVariance(3.0, 0.3) + std::pow(3.0 * 0.7 / 0.3, 2));
  }
  {
    RngStream rng = suite.NextStream();
    const NbParams params(Rational(7, 2), TrialProb::Ratio(Rational(2, 5)));
    const auto pmf = [](std::int64_t k) { return NbPmf(3.5, 0.4, k); };
    const auto direct = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return SampleNb(r, params);
    });
    GofCheck(suite, "nb_rational", "r=7/2 p=2/5", direct, pmf);
    const auto waiting = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return SampleNbWaiting(r, params);
    });
    GofCheck(suite, "nb_waiting", "r=7/2 p=2/5", waiting, pmf);
    const auto inverse = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return SampleNbInverse(r, params);
    });
    GofCheck(suite, "nb_inverse", "r=7/2 p=2/5", inverse, pmf);
    const GofReport dw = ChiSquareTwoSample(direct, waiting);
    suite.Add("cross/nb_direct_vs_waiting", "r=7/2 p=2/5", dw.p_value,
              dw.p_value > kPValueFloor);
    const GofReport di = ChiSquareTwoSample(direct, inverse);
    suite.Add("cross/nb_direct_vs_inverse", "r=7/2 p=2/5", di.p_value,
              di.p_value > kPValueFloor);
    const GofReport wi = ChiSquareTwoSample(waiting, inverse);
    suite.Add("cross/nb_waiting_vs_inverse", "r=7/2 p=2/5", wi.p_value,
              wi.p_value > kPValueFloor);
  }
  {
    RngStream rng = suite.NextStream();
    const NbParams params(Rational(1, 2),
                          TrialProb::OneMinusExpNeg(Rational(1)));
    const double p = -std::expm1(-1.0);
    const auto samples = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return SampleNb(r, params);
    });
    GofCheck(suite, "nb_gamma_form", "r=1/2 p=1-e^-1", samples,
             [p](std::int64_t k) { return NbPmf(0.5, p, k); });
  }
  {
    RngStream rng = suite.NextStream();
    const NbParams params(Rational(2), TrialProb::ExpNeg(Rational(1, 4)));
    const double p = std::exp(-0.25);
    const auto samples = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return SampleNb(r, params);
    });
    GofCheck(suite, "nb_expneg_form", "r=2 p=e^-1/4", samples,
             [p](std::int64_t k) { return NbPmf(2.0, p, k); });
  }
  // GDL.
  {
    RngStream rng = suite.NextStream();
    const GdlParams params(Rational(1, 2), Rational(1));
    const auto samples = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return SampleGdl(r, params);
    });
    GofCheck(suite, "gdl", "beta=1/2 a=1", samples,
             [](std::int64_t k) { return GdlPmf(0.5, 1.0, k); });
    VarCheck(suite, "gdl", "beta=1/2 a=1", samples, GdlVariance(0.5, 1.0));
  }
  {
    RngStream rng = suite.NextStream();
    const GdlParams params(Rational(2, 5), Rational(1, 2));
    const auto samples = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return SampleGdl(r, params);
    });
    GofCheck(suite, "gdl_small_beta", "beta=2/5 a=1/2", samples,
             [](std::int64_t k) { return GdlPmf(0.4, 0.5, k); });
  }
  // Multi-scale discrete Laplace: fast sampler, naive oracle, smoothed and
  // difference-set variants.
  {
    RngStream rng = suite.NextStream();
    const MsdLapParams params = MsdLapParams::Contiguous(Rational(2), 3);
    const PmfTable table = BuildPmfTable(params);
    const auto pmf = [table](std::int64_t k) { return table.At(k); };
    const auto fast = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return SampleMsdLap(r, params);
    });
    GofCheck(suite, "msdlap_plain", "eps=2 delta=3", fast, pmf);
    VarCheck(suite, "msdlap_plain", "eps=2 delta=3", fast,
             MsdLapVariance(params));
    const auto naive = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return SampleMsdLapNaive(r, params);
    });
    GofCheck(suite, "msdlap_naive", "eps=2 delta=3", naive, pmf);
  }
  {
    RngStream rng = suite.NextStream();
    const MsdLapParams params = MsdLapParams::Contiguous(Rational(3), 4, 1);
    const PmfTable table = BuildPmfTable(params);
    const auto samples = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return SampleMsdLap(r, params);
    });
    GofCheck(suite, "msdlap_smoothed", "eps=3 delta=4 r=1", samples,
             [table](std::int64_t k) { return table.At(k); });
  }
  {
    RngStream rng = suite.NextStream();
    const MsdLapParams params =
        MsdLapParams::FromScales(Rational(10), {5, 10, 30, 100});
    const PmfTable table = BuildPmfTable(params);
    const auto samples = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      return SampleMsdLap(r, params);
    });
    GofCheck(suite, "msdlap_diffset", "eps=10 scales={5,10,30,100}", samples,
             [table](std::int64_t k) { return table.At(k); });
    VarCheck(suite, "msdlap_diffset", "eps=10 scales={5,10,30,100}", samples,
             MsdLapVariance(params));
  }
  // Dirichlet-multinomial and the sparse multivariate NB.
  {
    RngStream rng = suite.NextStream();
    const DirMParams params(6, 3, Rational(1, 2));
    const auto samples = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      const SparseCounts counts = SampleDirM(r, params);
      const auto it = counts.find(1);
      return it == counts.end() ? std::int64_t{0}
                                : static_cast<std::int64_t>(it->second);
    });
    GofCheck(suite, "dirm_marginal", "n=6 k=3 alpha=1/2", samples,
             [](std::int64_t j) { return BetaBinomialPmf(6, 0.5, 1.0, j); });
  }
  {
    RngStream rng = suite.NextStream();
    const Rational r_param(1, 2);
    const TrialProb p = TrialProb::Ratio(Rational(1, 3));
    const auto samples = DrawMany(rng, kGofSamples, [&](RngStream& r) {
      const SparseCounts counts = SampleMultiNb(r, 4, r_param, p);
      const auto it = counts.find(1);
      return it == counts.end() ? std::int64_t{0}
                                : static_cast<std::int64_t>(it->second);
    });
    GofCheck(suite, "multi_nb_marginal", "k=4 r=1/2 p=1/3", samples,
             [](std::int64_t j) { return NbPmf(0.5, 1.0 / 3.0, j); });
  }
}

void AddDistributedChecks(Suite& suite) {
  {
    RngStream rng = suite.NextStream();
    const ShareSpec spec = PlanShares(DLapParams{Rational(1)}, 5);
    const auto sums = DrawMany(rng, kClosureSamples, [&](RngStream& r) {
      std::int64_t total = 0;
      for (int party = 0; party < 5; ++party) {
        total += SampleShare(r, spec);
      }
      return total;
    });
    GofCheck(suite, "closure_dlap", "a=1 n=5", sums,
             [](std::int64_t k) { return DLapPmf(1.0, k); });
    VarCheck(suite, "closure_dlap", "a=1 n=5", sums, DLapVariance(1.0));
  }
  {
    RngStream rng = suite.NextStream();
    const ShareSpec spec =
        PlanShares(GdlParams(Rational(3, 5), Rational(4, 5)), 7);
    const auto sums = DrawMany(rng, kClosureSamples, [&](RngStream& r) {
      std::int64_t total = 0;
      for (int party = 0; party < 7; ++party) {
        total += SampleShare(r, spec);
      }
      return total;
    });
    GofCheck(suite, "closure_gdl", "beta=3/5 a=4/5 n=7", sums,
             [](std::int64_t k) { return GdlPmf(0.6, 0.8, k); });
  }
  {
    RngStream rng = suite.NextStream();
    const MsdLapParams target = MsdLapParams::Contiguous(Rational(2), 3);
    const ShareSpec spec = PlanShares(target, 2);
    const PmfTable table = BuildPmfTable(target);
    const auto sums = DrawMany(rng, kClosureSamples, [&](RngStream& r) {
      return SampleShare(r, spec) + SampleShare(r, spec);
    });
    GofCheck(suite, "closure_msdlap", "eps=2 delta=3 n=2", sums,
             [table](std::int64_t k) { return table.At(k); });
  }
  {
    // Fewer honest parties can only weaken the realized privacy bound.
    double worst_slack = -std::numeric_limits<double>::infinity();
    bool monotone = true;
    const struct {
      GdlParams params;
      std::uint64_t n;
      std::uint64_t delta;
    } cases[] = {
        {GdlParams(Rational(1), Rational(1)), 6, 2},
        {GdlParams(Rational(1, 2), Rational(1)), 4, 1},
        {GdlParams(Rational(2), Rational(1, 2)), 5, 3},
    };
    for (const auto& c : cases) {
      double prev = std::numeric_limits<double>::infinity();
      for (std::uint64_t honest = 1; honest <= c.n; ++honest) {
        const DropoutReport report =
            DropoutEpsilon(c.params, c.n, honest, c.delta);
        const double slack = report.realized_eps.eps - prev;
        worst_slack = std::max(worst_slack, slack);
        if (slack > 1e-12) monotone = false;
        prev = report.realized_eps.eps;
      }
    }
    suite.Add("dropout/monotone", "3 parameter sets", worst_slack, monotone);
  }
}

void AddAccountantChecks(Suite& suite) {
  {
    const double value = Hyp2f1(1.0, 1.0, 2.0, 0.5);
    const double expect = 2.0 * std::log(2.0);
    const double err = std::abs(value - expect) / expect;
    suite.Add("special/hyp2f1_log_identity", "F(1,1;2;1/2)=2ln2", err,
              err < 1e-14);
  }
  {
    // Hypergeometric closed form against the direct convolution.
    const struct {
      double beta;
      double a;
    } grid[] = {{0.5, 1.0}, {0.4, 0.5}, {1.3, 0.8}};
    double worst = 0.0;
    for (const auto& g : grid) {
      for (const std::int64_t k : {0, 1, 2, 5}) {
        const double closed = GdlPmf(g.beta, g.a, k);
        const double conv = GdlPmfConvOracle(g.beta, g.a, k);
        worst = std::max(worst, std::abs(closed - conv) / conv);
      }
    }
    suite.Add("pmf/gdl_conv_agreement", "3 parameter pairs, k in {0,1,2,5}",
              worst, worst < 1e-10);
  }
  {
    // The three epsilon bounds keep their proven order on a grid.
    double worst = -std::numeric_limits<double>::infinity();
    bool ordered = true;
    for (const double beta : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      for (const double a : {0.5, 1.0, 2.0}) {
        for (std::uint64_t delta = 1; delta <= 4; ++delta) {
          const PrivacyBound bound = GdlEpsilon(beta, a, delta);
          const double margin =
              std::max(bound.eps - bound.eps_wendel,
                       bound.eps - bound.eps_simplified);
          worst = std::max(worst, margin);
          if (margin > 1e-12) ordered = false;
          if (!bound.eps_exact.has_value()) ordered = false;
        }
      }
    }
    suite.Add("accountant/bound_order", "beta<1 grid, exact<=wendel,simpl",
              worst, ordered);
  }
  {
    // Calibration consumes the whole budget: the simplified bound lands
    // exactly on the requested epsilon.
    double worst = 0.0;
    const struct {
      std::uint64_t delta;
      double eps;
    } cases[] = {{1, 4.0}, {4, 6.0}, {16, 8.0}};
    for (const auto& c : cases) {
      const GdlParams params = CalibrateGdl(c.eps, c.delta);
      const PrivacyBound bound =
          GdlEpsilon(params.beta.ToDouble(), params.a.ToDouble(), c.delta);
      worst = std::max(worst,
                       std::abs(bound.eps_simplified - c.eps) / c.eps);
    }
    suite.Add("calibration/budget_identity", "(1,4) (4,6) (16,8)", worst,
              worst < 1e-12);
  }
  {
    // Log-convexity and monotonicity of the GDL PMF, the shape facts the
    // privacy proof rests on.
    const LogConvexityReport shape =
        CheckLogConvexity(GdlParams(Rational(1, 2), Rational(1)), 40, 2);
    suite.Add("shape/gdl_log_convex", "beta=1/2 a=1 radius=40",
              shape.worst_margin, shape.decreasing && shape.log_convex);
  }
  {
    const struct {
      std::uint64_t r;
      double eps;
      std::uint64_t delta;
    } cases[] = {{1, 3.0, 4}, {2, 3.0, 4}, {4, 5.0, 4}};
    double worst = 0.0;
    for (const auto& c : cases) {
      const StaircaseParams params{c.r, c.eps, c.delta};
      const std::int64_t radius =
          static_cast<std::int64_t>(c.delta) *
          (static_cast<std::int64_t>(std::ceil(45.0 / c.eps)) + 4);
      const double brute = BruteVariance(
          [&params](std::int64_t k) { return StaircasePmf(params, k); },
          radius);
      worst = std::max(worst, std::abs(brute - StaircaseVariance(params)));
    }
    suite.Add("staircase/brute_variance", "(1,3,4) (2,3,4) (4,5,4)", worst,
              worst < 1e-9);
  }
  {
    // In the high-budget regime the best multi-scale variance matches the
    // best staircase variance after the documented correction factor.
    const double eps = 20.0;
    const std::uint64_t delta = 3;
    const std::uint64_t hole = ChooseHoleR(eps, delta);
    const double msd =
        MsdLapVariance(MsdLapParams::Contiguous(
            Rational::FromDouble(eps), delta, hole));
    const double stair = OptimalStaircaseVariance(eps, delta);
    const double correction =
        (1.0 + (2.0 * static_cast<double>(delta) - 1.0) * std::exp(-eps)) /
        ((1.0 - std::exp(-eps)) * (1.0 - std::exp(-eps)));
    const double ratio = msd / stair / correction;
    suite.Add("staircase/msdlap_ratio", "eps=20 delta=3",
              std::abs(ratio - 1.0), std::abs(ratio - 1.0) < 1e-6);
  }
}

void AddScanChecks(Suite& suite) {
  {
    const EpsilonScanReport scan = EpsilonScan(DLapParams{Rational(2)}, 1);
    const double err = std::abs(scan.max_log_ratio - 2.0);
    suite.Add("scan/dlap_identity", "a=2 delta=1", scan.max_log_ratio,
              err < 1e-12 && scan.radius_sufficient);
  }
  {
    const EpsilonScanReport scan =
        EpsilonScan(MsdLapParams::Contiguous(Rational(2), 3), 3);
    suite.Add("scan/msdlap_plain", "eps=2 delta=3", scan.max_log_ratio,
              scan.max_log_ratio <= 2.0 + 1e-9 &&
                  scan.max_log_ratio >= 2.0 - 1e-6 &&
                  scan.radius_sufficient);
  }
  {
    const EpsilonScanReport scan =
        EpsilonScan(MsdLapParams::Contiguous(Rational(3), 4, 1), 4);
    suite.Add("scan/msdlap_smoothed", "eps=3 delta=4 r=1",
              scan.max_log_ratio,
              scan.max_log_ratio <= 3.0 + 1e-9 && scan.radius_sufficient);
  }
  {
    const GdlParams params(Rational(3, 10), Rational(1, 2));
    const EpsilonScanReport scan = EpsilonScan(params, 2);
    const PrivacyBound bound = GdlEpsilon(0.3, 0.5, 2);
    const double err = std::abs(scan.max_log_ratio - bound.eps);
    suite.Add("scan/gdl_vs_accountant", "beta=3/10 a=1/2 delta=2", err,
              err < 1e-8 && scan.radius_sufficient);
  }
  {
    const GdlParams params(Rational(1, 2), Rational(1));
    const EpsilonScanReport scan = EpsilonScan(params, 2);
    const PrivacyBound bound = GdlEpsilon(0.5, 1.0, 2);
    const double err = std::abs(scan.max_log_ratio - bound.eps);
    suite.Add("scan/gdl_vs_accountant_2", "beta=1/2 a=1 delta=2", err,
              err < 1e-8 && scan.radius_sufficient);
  }
}

void AddShuffleChecks(Suite& suite) {
  {
    const ShuffleParams params = DeriveShuffleParams(3.0, 1e-4, 100);
    const bool pass = params.delta == 28 && params.q == 5600 &&
                      params.m == 4 && params.message_bits == 13;
    suite.Add("shuffle/derived_params", "eps=3 n=100 delta_dp=1e-4",
              static_cast<double>(params.delta), pass);
  }
  {
    // Randomized rounding is unbiased.
    RngStream rng = suite.NextStream();
    const ShuffleParams params = DeriveShuffleParams(3.0, 1e-4, 100);
    const double x = 0.37;
    const std::size_t n = 200000;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += static_cast<double>(
          RandomizeParty(rng, params, nullptr, x).clear_value);
    }
    const double mean = sum / static_cast<double>(n);
    const double expect = static_cast<double>(params.delta) * x;
    // Worst-case rounding variance is 1/4.
    const double se = 0.5 / std::sqrt(static_cast<double>(n));
    const double z = (mean - expect) / se;
    suite.Add("shuffle/rounding_unbiased", "x=0.37 delta=28", z,
              std::abs(z) < 4.0);
  }
  {
    // With noise off the protocol is an exact Z_q summation: the decode
    // returns the rounded sum exactly, every round.
    RngStream rng = suite.NextStream();
    const ShuffleParams params = DeriveShuffleParams(2.0, 1e-3, 20);
    std::vector<double> xs(20);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] = static_cast<double>(i) / 20.0;
    }
    double worst = 0.0;
    for (int round = 0; round < 50; ++round) {
      const Transcript t = RunRound(rng, params, nullptr, xs);
      const double exact = static_cast<double>(t.clear_sum) /
                           static_cast<double>(params.delta);
      worst = std::max(worst, std::abs(t.decoded - exact));
    }
    suite.Add("shuffle/exact_zero_noise", "n=20 rounds=50", worst,
              worst == 0.0);
  }
  {
    RngStream rng = suite.NextStream();
    std::vector<double> xs(100);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] = 0.2 + 0.6 * static_cast<double>(i) / 99.0;
    }
    ExperimentOptions options;
    options.trials = 200;
    options.aggregated = true;
    const ShuffleExperiment experiment =
        RunExperiment(rng, xs, 4.0, 1e-4, options);
    const double ratio = experiment.empirical_mse / experiment.analytic_bound;
    suite.Add("shuffle/mse_within_bound", "eps=4 n=100 trials=200", ratio,
              ratio <= 1.5 && experiment.accuracy_violations == 0);
  }
}

void AddContinuousChecks(Suite& suite) {
  {
    RngStream rng = suite.NextStream();
    const ContinuousParams params = CalibrateContinuous(Rational(6), 1.0);
    std::vector<double> samples(kGofSamples);
    for (auto& s : samples) s = SampleContinuous(rng, params);
    const VarianceReport var = VarianceZTest(samples, params.variance);
    suite.Add("var/continuous", "eps=6 sensitivity=1", var.z_score, var.pass);
  }
  {
    RngStream rng = suite.NextStream();
    const auto rows =
        DemoAreteConvergence(rng, 0.3, 1.0, 0.2, {4, 16, 64, 256}, 20000);
    const double slack = 2.0 * std::sqrt(2.0 / 20000.0);
    double worst_increase = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < rows.size(); ++i) {
      worst_increase = std::max(
          worst_increase, rows[i].ks_statistic - rows[i - 1].ks_statistic);
    }
    suite.Add("arete/ks_non_increasing", "k=0.3 theta=1 lambda=0.2",
              worst_increase, worst_increase <= slack);
  }
}

}  // namespace

SuiteReport RunVerificationSuite(std::uint64_t seed) {
  Suite suite(seed);
  AddSamplerChecks(suite);
  AddDistributedChecks(suite);
  AddAccountantChecks(suite);
  AddScanChecks(suite);
  AddShuffleChecks(suite);
  AddContinuousChecks(suite);
  suite.report.all_passed = true;
  for (const CheckResult& check : suite.report.checks) {
    if (!check.passed) suite.report.all_passed = false;
  }
  return suite.report;
}

void WriteSuiteReportJson(const SuiteReport& report, std::ostream& out) {
  nlohmann::json doc;
  doc["all_passed"] = report.all_passed;
  doc["checks"] = nlohmann::json::array();
  for (const CheckResult& check : report.checks) {
    nlohmann::json entry;
    entry["name"] = check.name;
    entry["params"] = check.params;
    entry["statistic"] = check.statistic;
    entry["verdict"] = check.passed ? "pass" : "fail";
    doc["checks"].push_back(entry);
  }
  out << doc.dump(2) << '\n';
}

}  // namespace divnoise
