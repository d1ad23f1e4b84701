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

#include "divnoise/distributed.h"

#include <variant>
#include <vector>

#include "divnoise/errors.h"
#include "divnoise/samplers.h"

namespace divnoise {
namespace {

Rational InverseParties(std::uint64_t n_parties) {
  return Rational(BigInt(1), BigInt(n_parties));
}

// A GDL(shape, rate-form gamma) draw: difference of two NB draws.
std::int64_t GdlShare(RngStream& rng, const Rational& shape,
                      const Rational& gamma) {
  const NbParams nb = NbParams::FromGamma(shape, gamma);
  return SampleNb(rng, nb) - SampleNb(rng, nb);
}

// Multi-scale share: the per-scale DLap(rate) draws split into GDL(1/n)
// pairs, all 2m variates drawn in one sparse batch; the smoothing DLap
// splits the same way.
std::int64_t MsdLapShare(RngStream& rng, const MsdLapParams& params,
                         std::uint64_t n_parties) {
  const std::vector<std::uint64_t>& scales = params.scales();
  const std::uint64_t m = scales.size();
  const SparseCounts counts =
      SampleMultiNb(rng, 2 * m, InverseParties(n_parties),
                    TrialProb::OneMinusExpNeg(params.ScaleRate()));
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
        GdlShare(rng, InverseParties(n_parties),
                 Rational(1, params.hole_r()));
  }
  return z;
}

}  // namespace

ShareSpec PlanShares(const DiscreteDist& target, std::uint64_t n_parties) {
  Require(n_parties >= 1, "PlanShares: need at least one party");
  return ShareSpec{target, n_parties};
}

std::int64_t SampleShare(RngStream& rng, const ShareSpec& spec) {
  Require(spec.n_parties >= 1, "SampleShare: need at least one party");
  const Rational inv_n = InverseParties(spec.n_parties);
  return std::visit(
      [&](const auto& params) -> std::int64_t {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, NbParams>) {
          return SampleNb(rng, NbParams(params.r * inv_n, params.p));
        } else if constexpr (std::is_same_v<T, DLapParams>) {
          return GdlShare(rng, inv_n, params.a);
        } else if constexpr (std::is_same_v<T, GdlParams>) {
          return GdlShare(rng, params.beta * inv_n, params.a);
        } else {
          return MsdLapShare(rng, params, spec.n_parties);
        }
      },
      spec.target);
}

DropoutReport DropoutEpsilon(const DiscreteDist& target,
                             std::uint64_t n_parties, std::uint64_t honest,
                             std::uint64_t delta) {
  Require(n_parties >= 1, "DropoutEpsilon: need at least one party");
  Require(honest >= 1 && honest <= n_parties,
          "DropoutEpsilon: honest party count must lie in [1, n]");
  Rational beta(0);
  Rational a(0);
  if (const auto* dlap = std::get_if<DLapParams>(&target)) {
    beta = Rational(1);
    a = dlap->a;
  } else if (const auto* gdl = std::get_if<GdlParams>(&target)) {
    beta = gdl->beta;
    a = gdl->a;
  } else {
    throw PreconditionError(
        "DropoutEpsilon: dropout analysis covers GDL-family targets only");
  }
  DropoutReport report;
  report.n_parties = n_parties;
  report.honest = honest;
  report.realized_beta =
      beta * Rational(BigInt(honest), BigInt(n_parties));
  report.realized_eps =
      GdlEpsilon(GdlParams(report.realized_beta, a), delta);
  return report;
}

}  // namespace divnoise
