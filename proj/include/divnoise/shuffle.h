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

#ifndef DIVNOISE_SHUFFLE_H_
#define DIVNOISE_SHUFFLE_H_

#include <cstdint>
#include <ostream>
#include <vector>

#include "divnoise/distributions.h"
#include "divnoise/rng.h"

namespace divnoise {

// Split-and-mix shuffle protocol for private real summation, simulated end
// to end: each party randomized-rounds its input x in [0, 1] onto the grid
// {0..delta}, adds one divisible noise share, reduces into Z_q, and splits
// the residue into m additive messages; the shuffler permutes all n*m
// messages; the analyzer sums them mod q (exactly) and decodes.
//
// This is a functional simulator: the Z_q sum, message counts, and message
// widths are real, while the sigma bits of shuffle security are carried from
// the split-and-mix analysis, not re-measured here.

struct ShuffleParams {
  double eps = 0.0;               // pure-DP budget of the aggregate noise
  double delta_dp = 0.0;          // approximate-DP slack after shuffling
  std::uint64_t n = 0;            // parties
  std::uint64_t delta = 0;        // rounding granularity: ceil(e^(eps/3) sqrt(n))
  std::uint64_t q = 0;            // group modulus, 2 n delta
  double sigma = 0.0;             // security bits: log2((e^eps + 1) / delta_dp)
  std::uint64_t m = 0;            // messages per party
  std::uint64_t message_bits = 0; // ceil(log2 q)
  std::uint64_t hole_r = 0;       // smoothing parameter of the noise law
};

// Derives all protocol parameters.  Requires eps >= 2, n >= 2, and
// delta_dp in (0, 1/n); the message count is fixed to
// max(1, ceil(sigma / log2 n) + 1).
ShuffleParams DeriveShuffleParams(double eps, double delta_dp,
                                  std::uint64_t n);

// The aggregate noise law D: multi-scale discrete Laplace at sensitivity
// delta with the variance-minimizing smoothing parameter.  Parties add
// shares of D split n ways.
MsdLapParams ShuffleNoise(const ShuffleParams& params);

struct PartyMessages {
  std::vector<std::uint64_t> messages;  // m residues mod q, summing to the
                                        // party's Z_q contribution
  std::int64_t clear_value = 0;         // y + z over the integers
                                        // (simulation-side bookkeeping)
};

// One party's randomizer: randomized rounding of x, one noise share drawn
// from `noise` split n ways (pass nullptr to disable noise — simulation
// aid, not part of the protocol), reduction mod q, and the additive
// m-way split.
PartyMessages RandomizeParty(RngStream& rng, const ShuffleParams& params,
                             const MsdLapParams* noise, double x);

// The analyzer: sums exactly n*m messages mod q and applies the three-case
// decode; the result lies in [0, n] and estimates the input sum.
double AnalyzeMessages(const std::vector<std::uint64_t>& messages,
                       const ShuffleParams& params);

struct Transcript {
  std::vector<std::uint64_t> messages;  // shuffled flat list, n*m entries
  double decoded = 0.0;                 // analyzer output
  double true_sum = 0.0;                // sum of the inputs
  std::int64_t clear_sum = 0;           // pre-reduction noisy sum
                                        // (simulation-side bookkeeping)
};

// One full protocol round over inputs xs (one per party).  Checks on every
// transcript that each party's m messages sum to its intended residue, and
// shuffles with a dedicated stream derived from rng.
Transcript RunRound(RngStream& rng, const ShuffleParams& params,
                    const MsdLapParams* noise, const std::vector<double>& xs);

// One JSON record per message: {"q": ..., "value": ...}.
void WriteTranscriptJsonLines(const Transcript& transcript,
                              const ShuffleParams& params, std::ostream& out);

struct ExperimentOptions {
  std::uint64_t trials = 100;
  bool noise_enabled = true;
  // Draw the aggregate noise in one piece instead of n shares and skip the
  // message layer.  The analyzer input has the same law (shares of D sum to
  // D exactly; the Z_q sum is exact), so MSE scans can afford many trials.
  bool aggregated = false;
};

struct ShuffleExperiment {
  ShuffleParams params;
  std::uint64_t trials = 0;
  double empirical_mse = 0.0;
  double analytic_bound = 0.0;          // Var(D)/delta^2 + n/(4 delta^2)
  std::uint64_t accuracy_violations = 0;  // trials where |r' - u| exceeded
                                          // |u~/delta - u|
};

// Repeated rounds over fixed inputs xs; reports the empirical MSE of the
// decoded sum against the analytic bound, and counts violations of the
// per-trial accuracy inequality.  With noise disabled the bound reduces to
// the rounding-only term n/(4 delta^2).
ShuffleExperiment RunExperiment(RngStream& rng, const std::vector<double>& xs,
                                double eps, double delta_dp,
                                const ExperimentOptions& options);

}  // namespace divnoise

#endif  // DIVNOISE_SHUFFLE_H_
