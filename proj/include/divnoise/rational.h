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

#ifndef DIVNOISE_RATIONAL_H_
#define DIVNOISE_RATIONAL_H_

#include <cmath>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "divnoise/errors.h"

namespace divnoise {

using BigInt = boost::multiprecision::cpp_int;

// An exact rational number with arbitrary-precision numerator and
// denominator, always stored in lowest terms with a positive denominator.
// This is the currency of the exact samplers: every trial probability and
// every exponential rate is carried as a Rational so that the Bernoulli and
// geometric primitives can realize it without floating-point error.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    Require(den_ != 0, "Rational: denominator must be nonzero");
    Normalize();
  }
  // Intentional implicit conversion so integer literals work as Rationals.
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool IsZero() const { return num_ == 0; }
  bool IsNegative() const { return num_ < 0; }
  int Sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }

  // Converts a double to the exact rational it represents.  Every finite
  // double is a dyadic rational, so this conversion is lossless.
  static Rational FromDouble(double value);

  // Parses "a/b", "a", or a decimal literal such as "0.25" (exactly, as a
  // power-of-ten fraction).  Throws PreconditionError on malformed input.
  static Rational Parse(const std::string& text);

  double ToDouble() const;
  std::string ToString() const;

  Rational operator-() const { return Rational(Raw{}, -num_, den_); }
  Rational operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  Rational operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  Rational operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
  }
  Rational operator/(const Rational& o) const {
    Require(o.num_ != 0, "Rational: division by zero");
    return Rational(num_ * o.den_, den_ * o.num_);
  }

  bool operator==(const Rational& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const {
    return num_ * o.den_ < o.num_ * den_;
  }
  bool operator<=(const Rational& o) const {
    return num_ * o.den_ <= o.num_ * den_;
  }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

 private:
  struct Raw {};  // Tag: construct without re-normalizing.
  Rational(Raw, BigInt num, BigInt den)
      : num_(std::move(num)), den_(std::move(den)) {}

  void Normalize();

  BigInt num_;
  BigInt den_;
};

// Best rational approximations with bounded denominator, computed from the
// exact continued fraction of `value` (itself converted losslessly).  These
// are used to round an irrational exponential rate onto the rational grid in
// a chosen direction: rounding a noise rate *up* can only add noise, so the
// privacy guarantee survives the rounding.
//
// Both return the closest rational r with den(r) <= max_den subject to the
// stated side constraint.  `value` must be finite and max_den >= 1.
Rational BestRationalAtMost(double value, std::uint64_t max_den);
Rational BestRationalAtLeast(double value, std::uint64_t max_den);

}  // namespace divnoise

#endif  // DIVNOISE_RATIONAL_H_
