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

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "divnoise/analysis.h"
#include "divnoise/errors.h"
#include "divnoise/rng.h"

namespace divnoise {
namespace {

// mpmath: log2(e^3 + 1) - log2(1e-4)
constexpr double kSigma3 = 17.685894233381705854;

std::vector<double> InteriorGrid(std::uint64_t n) {
  std::vector<double> xs(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    xs[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  }
  return xs;
}

TEST(DeriveParamsTest, FrozenReferencePoint) {
  const ShuffleParams params = DeriveShuffleParams(3.0, 1e-4, 100);
  EXPECT_EQ(params.n, 100u);
  EXPECT_EQ(params.delta, 28u);  // ceil(e * 10)
  EXPECT_EQ(params.q, 5600u);
  EXPECT_NEAR(params.sigma, kSigma3, 1e-12 * kSigma3);
  EXPECT_EQ(params.m, 4u);
  EXPECT_EQ(params.message_bits, 13u);
  EXPECT_EQ(params.hole_r, ChooseHoleR(3.0, 28));
}

TEST(DeriveParamsTest, RejectsOutOfRangeArguments) {
  EXPECT_THROW(DeriveShuffleParams(1.5, 1e-4, 100), PreconditionError);
  EXPECT_THROW(DeriveShuffleParams(3.0, 1e-4, 1), PreconditionError);
  EXPECT_THROW(DeriveShuffleParams(3.0, 0.0, 100), PreconditionError);
  EXPECT_THROW(DeriveShuffleParams(3.0, 0.02, 100), PreconditionError);
}

TEST(DeriveParamsTest, NoiseLawCarriesTheBudget) {
  const ShuffleParams params = DeriveShuffleParams(3.0, 1e-4, 100);
  const MsdLapParams noise = ShuffleNoise(params);
  EXPECT_EQ(noise.delta(), params.delta);
  EXPECT_EQ(noise.hole_r(), params.hole_r);
  EXPECT_DOUBLE_EQ(noise.eps().ToDouble(), params.eps);
}

TEST(RandomizePartyTest, MessagesFormAnAdditiveSharing) {
  RngStream rng(3101);
  const ShuffleParams params = DeriveShuffleParams(2.0, 1e-3, 20);
  const MsdLapParams noise = ShuffleNoise(params);
  for (int i = 0; i < 200; ++i) {
    const PartyMessages party = RandomizeParty(rng, params, &noise, 0.37);
    ASSERT_EQ(party.messages.size(), params.m);
    std::uint64_t sum = 0;
    for (const std::uint64_t message : party.messages) {
      EXPECT_LT(message, params.q);
      sum = (sum + message) % params.q;
    }
    const std::int64_t q = static_cast<std::int64_t>(params.q);
    std::int64_t residue = party.clear_value % q;
    if (residue < 0) residue += q;
    EXPECT_EQ(sum, static_cast<std::uint64_t>(residue));
  }
}

TEST(RandomizePartyTest, EndpointInputsRoundDeterministically) {
  RngStream rng(3102);
  const ShuffleParams params = DeriveShuffleParams(2.0, 1e-3, 20);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(RandomizeParty(rng, params, nullptr, 1.0).clear_value,
              static_cast<std::int64_t>(params.delta));
    EXPECT_EQ(RandomizeParty(rng, params, nullptr, 0.0).clear_value, 0);
  }
  EXPECT_THROW(RandomizeParty(rng, params, nullptr, 1.5), PreconditionError);
  EXPECT_THROW(RandomizeParty(rng, params, nullptr, -0.1), PreconditionError);
}

TEST(AnalyzeMessagesTest, DecodesBothBranches) {
  const ShuffleParams params = DeriveShuffleParams(2.0, 1e-3, 20);
  const std::uint64_t n_delta = params.n * params.delta;
  std::vector<std::uint64_t> messages(params.n * params.m, 0);

  messages[0] = 45;  // in-range branch: decode r / delta
  EXPECT_DOUBLE_EQ(AnalyzeMessages(messages, params),
                   45.0 / static_cast<double>(params.delta));

  messages[0] = n_delta;  // boundary decodes to exactly n
  EXPECT_DOUBLE_EQ(AnalyzeMessages(messages, params),
                   static_cast<double>(params.n));

  messages[0] = n_delta + 7;  // wrapped branch clamps to n
  EXPECT_DOUBLE_EQ(AnalyzeMessages(messages, params),
                   static_cast<double>(params.n));

  messages[0] = params.q - 1;  // largest residue, still the wrapped branch
  EXPECT_DOUBLE_EQ(AnalyzeMessages(messages, params),
                   static_cast<double>(params.n));
}

TEST(AnalyzeMessagesTest, RejectsMalformedTranscripts) {
  const ShuffleParams params = DeriveShuffleParams(2.0, 1e-3, 20);
  std::vector<std::uint64_t> messages(params.n * params.m, 0);
  messages[3] = params.q;  // out of Z_q
  EXPECT_THROW(AnalyzeMessages(messages, params), PreconditionError);
  messages.pop_back();
  EXPECT_THROW(AnalyzeMessages(messages, params), PreconditionError);
}

TEST(RunRoundTest, NoiselessGridInputsDecodeExactly) {
  RngStream rng(3103);
  const ShuffleParams params = DeriveShuffleParams(2.0, 1e-3, 20);
  // 0 and 1 land on the rounding grid for every delta, so with the noise
  // disabled the decoded sum must equal the true sum exactly.
  std::vector<double> xs(params.n, 1.0);
  for (std::uint64_t i = 0; i < params.n; i += 2) xs[i] = 0.0;
  for (int round = 0; round < 50; ++round) {
    const Transcript transcript = RunRound(rng, params, nullptr, xs);
    EXPECT_DOUBLE_EQ(transcript.decoded, transcript.true_sum);
    EXPECT_EQ(transcript.clear_sum,
              static_cast<std::int64_t>(params.n / 2 * params.delta));
  }
}

TEST(RunRoundTest, TranscriptIsSelfConsistent) {
  RngStream rng(3104);
  const ShuffleParams params = DeriveShuffleParams(2.0, 1e-3, 20);
  const MsdLapParams noise = ShuffleNoise(params);
  const std::vector<double> xs = InteriorGrid(params.n);
  const Transcript transcript = RunRound(rng, params, &noise, xs);
  ASSERT_EQ(transcript.messages.size(), params.n * params.m);
  // Re-running the analyzer over the shuffled messages reproduces the
  // decoded value: the Z_q sum is permutation invariant.
  EXPECT_DOUBLE_EQ(AnalyzeMessages(transcript.messages, params),
                   transcript.decoded);
  EXPECT_DOUBLE_EQ(transcript.true_sum, 10.0);
  EXPECT_THROW(RunRound(rng, params, &noise, {0.5}), PreconditionError);
}

TEST(RunRoundTest, SameSeedSameTranscript) {
  const ShuffleParams params = DeriveShuffleParams(2.0, 1e-3, 20);
  const MsdLapParams noise = ShuffleNoise(params);
  const std::vector<double> xs = InteriorGrid(params.n);
  RngStream a(3105);
  RngStream b(3105);
  const Transcript ta = RunRound(a, params, &noise, xs);
  const Transcript tb = RunRound(b, params, &noise, xs);
  EXPECT_EQ(ta.messages, tb.messages);
  EXPECT_DOUBLE_EQ(ta.decoded, tb.decoded);
}

TEST(TranscriptJsonTest, OneParsableRecordPerMessage) {
  RngStream rng(3106);
  const ShuffleParams params = DeriveShuffleParams(2.0, 1e-3, 20);
  const MsdLapParams noise = ShuffleNoise(params);
  const Transcript transcript =
      RunRound(rng, params, &noise, InteriorGrid(params.n));
  std::ostringstream out;
  WriteTranscriptJsonLines(transcript, params, out);
  std::istringstream in(out.str());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    const nlohmann::json record = nlohmann::json::parse(line);
    EXPECT_EQ(record.at("q").get<std::uint64_t>(), params.q);
    EXPECT_LT(record.at("value").get<std::uint64_t>(), params.q);
    ++lines;
  }
  EXPECT_EQ(lines, params.n * params.m);
}

TEST(ExperimentTest, AggregatedBoundIsSelfConsistent) {
  RngStream rng(3107);
  ExperimentOptions options;
  options.trials = 200;
  options.aggregated = true;
  const ShuffleExperiment experiment =
      RunExperiment(rng, InteriorGrid(50), 4.0, 1e-3, options);
  const double delta_sq = static_cast<double>(experiment.params.delta) *
                          static_cast<double>(experiment.params.delta);
  const double expected_bound =
      MsdLapVariance(ShuffleNoise(experiment.params)) / delta_sq +
      static_cast<double>(experiment.params.n) / (4.0 * delta_sq);
  EXPECT_DOUBLE_EQ(experiment.analytic_bound, expected_bound);
  EXPECT_EQ(experiment.trials, 200u);
  EXPECT_GT(experiment.empirical_mse, 0.0);
  // Interior inputs keep the noisy sum far from the wrap boundary, so the
  // reduction loses nothing and the decode inequality holds per trial.
  EXPECT_EQ(experiment.accuracy_violations, 0u);
}

TEST(ExperimentTest, NoiselessGridInputsHaveZeroMse) {
  RngStream rng(3108);
  ExperimentOptions options;
  options.trials = 50;
  options.noise_enabled = false;
  std::vector<double> xs(20, 1.0);
  for (std::size_t i = 0; i < xs.size(); i += 2) xs[i] = 0.0;
  const ShuffleExperiment experiment =
      RunExperiment(rng, xs, 2.0, 1e-3, options);
  EXPECT_DOUBLE_EQ(experiment.empirical_mse, 0.0);
  const double delta_sq = static_cast<double>(experiment.params.delta) *
                          static_cast<double>(experiment.params.delta);
  EXPECT_DOUBLE_EQ(experiment.analytic_bound,
                   static_cast<double>(experiment.params.n) / (4.0 * delta_sq));
}

TEST(ExperimentTest, FullProtocolMatchesAggregatedLaw) {
  // The aggregated fast path must estimate the same MSE as the full
  // message-level protocol: shares of D sum to D and the Z_q sum is exact.
  ExperimentOptions full;
  full.trials = 150;
  ExperimentOptions aggregated;
  aggregated.trials = 150;
  aggregated.aggregated = true;
  const std::vector<double> xs = InteriorGrid(30);
  RngStream rng_full(3109);
  RngStream rng_agg(3109);
  const ShuffleExperiment a = RunExperiment(rng_full, xs, 3.0, 1e-3, full);
  const ShuffleExperiment b = RunExperiment(rng_agg, xs, 3.0, 1e-3, aggregated);
  EXPECT_DOUBLE_EQ(a.analytic_bound, b.analytic_bound);
  // Same law, independent draws: both MSEs sit near the (loose) bound; a
  // 3x disagreement would flag a broken path without flaking on noise.
  EXPECT_LT(a.empirical_mse, 3.0 * b.empirical_mse + 1e-6);
  EXPECT_LT(b.empirical_mse, 3.0 * a.empirical_mse + 1e-6);
}

TEST(ExperimentTest, DeterministicForFixedSeed) {
  ExperimentOptions options;
  options.trials = 30;
  const std::vector<double> xs = InteriorGrid(20);
  RngStream a(3110);
  RngStream b(3110);
  const double mse_a = RunExperiment(a, xs, 2.0, 1e-3, options).empirical_mse;
  const double mse_b = RunExperiment(b, xs, 2.0, 1e-3, options).empirical_mse;
  EXPECT_DOUBLE_EQ(mse_a, mse_b);
}

}  // namespace
}  // namespace divnoise
