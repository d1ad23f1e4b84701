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

#ifndef DIVNOISE_VERIFY_H_
#define DIVNOISE_VERIFY_H_

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "divnoise/distributions.h"

namespace divnoise {

// Statistical and numerical checks backing the library's closed-form
// claims: goodness of fit for every sampler, empirical-variance z-tests,
// and brute-force privacy-ratio scans compared against the accountants.

struct GofReport {
  double statistic = 0.0;
  std::uint64_t dof = 0;
  double p_value = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t n_bins = 0;
  std::int64_t support_lo = 0;  // smallest and largest observed values
  std::int64_t support_hi = 0;
};

// Chi-square goodness of fit of integer samples against a PMF.  Cells are
// per-integer over the observed range, with the out-of-range tail mass
// folded into the extreme cells; cells are then merged left-to-right until
// each bin's expected count reaches min_expected.  Requires >= 1000 samples
// and a binning with at least two bins.
GofReport ChiSquareFit(const std::vector<std::int64_t>& samples,
                       const std::function<double(std::int64_t)>& pmf,
                       double min_expected = 5.0);

// Chi-square homogeneity test that two sample sets share one law; binning
// as above with expectations from the pooled empirical distribution.
GofReport ChiSquareTwoSample(const std::vector<std::int64_t>& a,
                             const std::vector<std::int64_t>& b,
                             double min_expected = 5.0);

struct VarianceReport {
  double empirical = 0.0;
  double analytic = 0.0;
  double z_score = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  bool pass = false;
};

// z-test of the empirical second moment of a zero-mean sample against the
// analytic variance; the standard error comes from the empirical fourth
// moment.  Passes iff |z| < 4.  Requires >= 10^4 samples.
VarianceReport VarianceZTest(const std::vector<double>& samples,
                             double analytic_variance);

struct EpsilonScanReport {
  double max_log_ratio = 0.0;  // max over shifts and points of
                               // ln(pmf(k - shift) / pmf(k))
  std::int64_t worst_shift = 0;
  std::int64_t worst_point = 0;
  double tail_bound = 0.0;       // PMF mass outside the scanned window
  bool radius_sufficient = false;  // the ratio stopped growing well inside
                                   // the window (see .cc for the rule)
};

// Brute-force privacy scan: tabulates the PMF (mass outside the table's
// window below 1e-14) and maximizes the log likelihood ratio over all
// shifts in [-delta, delta] and all in-window points.  A mechanism that is
// eps-DP at sensitivity delta must keep this below eps.
EpsilonScanReport EpsilonScan(const DiscreteDist& dist, std::uint64_t delta);

// GDL PMF by direct convolution of two NB PMFs — an oracle independent of
// the hypergeometric closed form.
double GdlPmfConvOracle(double beta, double a, std::int64_t k);

// Sum of k^2 pmf(k) over [-radius, radius]; brute-force variance for laws
// whose tail beyond the radius is negligible.
double BruteVariance(const std::function<double(std::int64_t)>& pmf,
                     std::int64_t radius);

// ---------------------------------------------------------------------------
// The wired-in verification suite.

struct CheckResult {
  std::string name;
  std::string params;
  double statistic = 0.0;
  bool passed = false;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  bool all_passed = false;
};

// Runs every suite check with streams derived from `seed`: goodness of fit
// and a variance test for each sampler, convolution-closure checks for the
// distributed shares, privacy scans against the accountants, calibration
// and staircase identities, and the shuffle protocol's structural
// invariants.  Deterministic for a fixed seed.
SuiteReport RunVerificationSuite(std::uint64_t seed);

// One JSON object: {"all_passed": ..., "checks": [{name, params, statistic,
// verdict}, ...]}.
void WriteSuiteReportJson(const SuiteReport& report, std::ostream& out);

}  // namespace divnoise

#endif  // DIVNOISE_VERIFY_H_
