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

#include "divnoise/shuffle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "divnoise/analysis.h"
#include "divnoise/distributed.h"
#include "divnoise/errors.h"
#include "divnoise/exact_rand.h"
#include "divnoise/samplers.h"
#include "json.hpp"

namespace divnoise {
namespace {

constexpr double kLn2 = 0.6931471805599453;
// Slack when comparing the decoded estimate against the accuracy
// inequality's right-hand side; both sides are exact up to double rounding.
constexpr double kAccuracyTol = 1e-9;

std::uint64_t ModQ(std::int64_t value, std::uint64_t q) {
  const std::int64_t signed_q = static_cast<std::int64_t>(q);
  std::int64_t r = value % signed_q;
  if (r < 0) r += signed_q;
  return static_cast<std::uint64_t>(r);
}

// Randomized rounding of x in [0, 1] onto {0..delta}: floor(delta x) plus a
// Bernoulli on the fractional part, so the expectation is exactly delta x.
std::uint64_t RoundRandomized(RngStream& rng, std::uint64_t delta, double x) {
  Require(x >= 0.0 && x <= 1.0, "shuffle: inputs must lie in [0, 1]");
  const double scaled = static_cast<double>(delta) * x;
  const double floor_part = std::floor(scaled);
  const double frac = scaled - floor_part;
  std::uint64_t y = static_cast<std::uint64_t>(floor_part);
  if (rng.NextUnit() < frac) ++y;
  return y;
}

double DecodeSum(std::uint64_t r, const ShuffleParams& params) {
  const std::uint64_t n_delta = params.n * params.delta;
  if (r <= n_delta) {
    return static_cast<double>(r) / static_cast<double>(params.delta);
  }
  if (r >= n_delta + 1 && r <= 2 * n_delta) {
    return static_cast<double>(params.n);
  }
  return 0.0;
}

void FisherYates(RngStream& rng, std::vector<std::uint64_t>& values) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::uint64_t j = UniformBelow(rng, i);
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace

ShuffleParams DeriveShuffleParams(double eps, double delta_dp,
                                  std::uint64_t n) {
  Require(eps >= 2.0, "DeriveShuffleParams: eps must be at least 2");
  Require(n >= 2, "DeriveShuffleParams: need at least two parties");
  Require(delta_dp > 0.0 && delta_dp < 1.0 / static_cast<double>(n),
          "DeriveShuffleParams: delta_dp must lie in (0, 1/n)");
  ShuffleParams params;
  params.eps = eps;
  params.delta_dp = delta_dp;
  params.n = n;
  const double delta_real =
      std::ceil(std::exp(eps / 3.0) * std::sqrt(static_cast<double>(n)));
  Require(delta_real <= 4.6e18, "DeriveShuffleParams: delta overflows");
  params.delta = static_cast<std::uint64_t>(delta_real);
  Require(params.delta <= (std::uint64_t{1} << 61) / n,
          "DeriveShuffleParams: modulus exceeds one machine word");
  params.q = 2 * n * params.delta;
  // log2(e^eps + 1) evaluated without overflowing e^eps.
  params.sigma =
      (eps + std::log1p(std::exp(-eps))) / kLn2 - std::log2(delta_dp);
  const double log2_n = std::log2(static_cast<double>(n));
  params.m = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::ceil(params.sigma / log2_n)) + 1);
  params.message_bits = std::bit_width(params.q - 1);
  params.hole_r = ChooseHoleR(eps, params.delta);
  return params;
}

MsdLapParams ShuffleNoise(const ShuffleParams& params) {
  return MsdLapParams::Contiguous(Rational::FromDouble(params.eps),
                                  params.delta, params.hole_r);
}

PartyMessages RandomizeParty(RngStream& rng, const ShuffleParams& params,
                             const MsdLapParams* noise, double x) {
  const std::uint64_t y = RoundRandomized(rng, params.delta, x);
  std::int64_t z = 0;
  if (noise != nullptr) {
    z = SampleShare(rng, ShareSpec{*noise, params.n});
  }
  PartyMessages party;
  party.clear_value = static_cast<std::int64_t>(y) + z;
  const std::uint64_t residue = ModQ(party.clear_value, params.q);
  party.messages.resize(params.m);
  std::uint64_t running = 0;
  for (std::uint64_t j = 0; j + 1 < params.m; ++j) {
    party.messages[j] = UniformBelow(rng, params.q);
    running = (running + party.messages[j]) % params.q;
  }
  party.messages[params.m - 1] = (residue + params.q - running) % params.q;
  return party;
}

double AnalyzeMessages(const std::vector<std::uint64_t>& messages,
                       const ShuffleParams& params) {
  Require(messages.size() == params.n * params.m,
          "AnalyzeMessages: expected exactly n*m messages");
  std::uint64_t acc = 0;
  for (const std::uint64_t message : messages) {
    Require(message < params.q, "AnalyzeMessages: message out of Z_q");
    acc = (acc + message) % params.q;
  }
  return DecodeSum(acc, params);
}

Transcript RunRound(RngStream& rng, const ShuffleParams& params,
                    const MsdLapParams* noise, const std::vector<double>& xs) {
  Require(xs.size() == params.n, "RunRound: need one input per party");
  Transcript transcript;
  transcript.messages.reserve(params.n * params.m);
  for (const double x : xs) {
    const PartyMessages party = RandomizeParty(rng, params, noise, x);
    std::uint64_t share_sum = 0;
    for (const std::uint64_t message : party.messages) {
      share_sum = (share_sum + message) % params.q;
    }
    Require(share_sum == ModQ(party.clear_value, params.q),
            "RunRound: party messages do not sum to its residue");
    transcript.messages.insert(transcript.messages.end(),
                               party.messages.begin(), party.messages.end());
    transcript.clear_sum += party.clear_value;
    transcript.true_sum += x;
  }
  RngStream shuffler(rng.NextWord());
  FisherYates(shuffler, transcript.messages);
  transcript.decoded = AnalyzeMessages(transcript.messages, params);
  return transcript;
}

void WriteTranscriptJsonLines(const Transcript& transcript,
                              const ShuffleParams& params,
                              std::ostream& out) {
  for (const std::uint64_t message : transcript.messages) {
    nlohmann::json record;
    record["value"] = message;
    record["q"] = params.q;
    out << record.dump() << '\n';
  }
}

ShuffleExperiment RunExperiment(RngStream& rng, const std::vector<double>& xs,
                                double eps, double delta_dp,
                                const ExperimentOptions& options) {
  Require(options.trials >= 1, "RunExperiment: need at least one trial");
  ShuffleExperiment experiment;
  experiment.params = DeriveShuffleParams(eps, delta_dp, xs.size());
  const ShuffleParams& params = experiment.params;
  const MsdLapParams noise = ShuffleNoise(params);
  const MsdLapParams* noise_ptr = options.noise_enabled ? &noise : nullptr;
  const double delta_sq =
      static_cast<double>(params.delta) * static_cast<double>(params.delta);
  const double rounding_term =
      static_cast<double>(params.n) / (4.0 * delta_sq);
  experiment.analytic_bound =
      options.noise_enabled ? MsdLapVariance(noise) / delta_sq + rounding_term
                            : rounding_term;
  experiment.trials = options.trials;
  double true_sum = 0.0;
  for (const double x : xs) {
    Require(x >= 0.0 && x <= 1.0, "RunExperiment: inputs must lie in [0, 1]");
    true_sum += x;
  }
  double sum_sq_err = 0.0;
  for (std::uint64_t t = 0; t < options.trials; ++t) {
    double decoded;
    std::int64_t clear_sum;
    if (options.aggregated) {
      std::int64_t sum_y = 0;
      for (const double x : xs) {
        sum_y += static_cast<std::int64_t>(
            RoundRandomized(rng, params.delta, x));
      }
      const std::int64_t z =
          options.noise_enabled ? SampleMsdLap(rng, noise) : 0;
      clear_sum = sum_y + z;
      decoded = DecodeSum(ModQ(clear_sum, params.q), params);
    } else {
      const Transcript transcript = RunRound(rng, params, noise_ptr, xs);
      decoded = transcript.decoded;
      clear_sum = transcript.clear_sum;
    }
    const double err = decoded - true_sum;
    sum_sq_err += err * err;
    const double unreduced_err =
        static_cast<double>(clear_sum) / static_cast<double>(params.delta) -
        true_sum;
    if (std::abs(err) > std::abs(unreduced_err) + kAccuracyTol) {
      ++experiment.accuracy_violations;
    }
  }
  experiment.empirical_mse = sum_sq_err / static_cast<double>(options.trials);
  return experiment;
}

}  // namespace divnoise
