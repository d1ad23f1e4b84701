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

#include "divnoise/distributions.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace divnoise {

double TrialProb::ApproxDouble() const {
  switch (form_) {
    case Form::kRatio:
      return value_.ToDouble();
    case Form::kOneMinusExpNeg:
      return -std::expm1(-value_.ToDouble());
    case Form::kExpNeg:
      return std::exp(-value_.ToDouble());
  }
  return 0.0;  // unreachable
}

MsdLapParams MsdLapParams::Contiguous(const Rational& eps, std::uint64_t delta,
                                      std::uint64_t hole_r) {
  Require(eps.Sign() > 0, "MsdLapParams: eps must be positive");
  Require(delta >= 1, "MsdLapParams: delta must be >= 1");
  Require(hole_r <= delta, "MsdLapParams: hole_r must lie in {0..delta}");
  if (hole_r >= 1) {
    Require(eps >= Rational(2),
            "MsdLapParams: the smoothed variant requires eps >= 2");
  }
  MsdLapParams params;
  params.eps_ = eps;
  params.delta_ = delta;
  params.hole_r_ = hole_r;
  std::uint64_t top = hole_r == 0 ? delta : delta / hole_r;
  params.scales_.reserve(top);
  for (std::uint64_t i = 1; i <= top; ++i) params.scales_.push_back(i);
  return params;
}

MsdLapParams MsdLapParams::FromScales(const Rational& eps,
                                      std::vector<std::uint64_t> scales) {
  Require(eps.Sign() > 0, "MsdLapParams: eps must be positive");
  Require(!scales.empty(), "MsdLapParams: scale set must be non-empty");
  std::sort(scales.begin(), scales.end());
  Require(scales.front() >= 1, "MsdLapParams: scales must be positive");
  Require(std::adjacent_find(scales.begin(), scales.end()) == scales.end(),
          "MsdLapParams: scales must be distinct");
  MsdLapParams params;
  params.eps_ = eps;
  params.delta_ = scales.back();
  params.hole_r_ = 0;
  params.scales_ = std::move(scales);
  return params;
}

}  // namespace divnoise
