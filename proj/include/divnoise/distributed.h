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

#ifndef DIVNOISE_DISTRIBUTED_H_
#define DIVNOISE_DISTRIBUTED_H_

#include <cstdint>

#include "divnoise/analysis.h"
#include "divnoise/distributions.h"
#include "divnoise/rng.h"

namespace divnoise {

// Distributed noise generation.  Every distribution in DiscreteDist is
// infinitely divisible: the target law is the n-fold convolution of a share
// law in the same family, so n parties can each add one share and the
// aggregate carries exactly the intended noise with no party trusted.
//
//   NB(r, p)        -> n shares of NB(r/n, p)
//   DLap(a)         -> n shares of GDL(1/n, a)   (a difference of NB draws)
//   GDL(beta, a)    -> n shares of GDL(beta/n, a)
//   multi-scale     -> per-scale GDL shares, drawn in one sparse batch
//
// Shares are sampled exactly (see samplers.h for the one documented rounding
// exception on the batched path).

struct ShareSpec {
  DiscreteDist target;
  std::uint64_t n_parties;
};

// Validates the split and returns the share plan.
ShareSpec PlanShares(const DiscreteDist& target, std::uint64_t n_parties);

// One party's additive share; summing n_parties independent draws
// reproduces the target law exactly.
std::int64_t SampleShare(RngStream& rng, const ShareSpec& spec);

// Privacy that survives when only `honest` of the planned parties
// contribute their shares.
struct DropoutReport {
  std::uint64_t n_parties = 0;
  std::uint64_t honest = 0;
  Rational realized_beta;     // shape actually accumulated: beta * honest / n
  PrivacyBound realized_eps;  // bound for the accumulated GDL noise
};

// Realized privacy of a GDL or DLap target at sensitivity delta when only
// `honest` parties contribute.  The accumulated noise is GDL(beta*h/n, a),
// still a pure-DP mechanism, just with a weaker epsilon.  Other targets are
// rejected: their dropout laws leave the analyzed family.
DropoutReport DropoutEpsilon(const DiscreteDist& target,
                             std::uint64_t n_parties, std::uint64_t honest,
                             std::uint64_t delta);

}  // namespace divnoise

#endif  // DIVNOISE_DISTRIBUTED_H_
