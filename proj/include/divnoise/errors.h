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

#ifndef DIVNOISE_ERRORS_H_
#define DIVNOISE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace divnoise {

// Raised when a caller violates a documented parameter precondition
// (e.g. a shape parameter that must be positive, or an epsilon below the
// range a calibration supports).  The CLI maps this to exit code 2.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Raised when a rejection sampler exceeds its iteration budget.  The budgets
// are sized so that this fires with probability far below 2^-64 per draw on
// valid parameters, so in practice it indicates a broken RNG or a bug.  The
// CLI maps this to exit code 4.
class SamplerAbortError : public std::runtime_error {
 public:
  explicit SamplerAbortError(const std::string& what)
      : std::runtime_error(what) {}
};

// Raised when a numeric routine cannot meet its accuracy contract
// (non-convergent series, overflow that scaling cannot absorb, ...).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Precondition helper: throws PreconditionError with `message` unless `cond`.
inline void Require(bool cond, const std::string& message) {
  if (!cond) throw PreconditionError(message);
}

}  // namespace divnoise

#endif  // DIVNOISE_ERRORS_H_
