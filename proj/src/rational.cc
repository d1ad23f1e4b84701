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

#include "divnoise/rational.h"

#include <cctype>
#include <cmath>
#include <limits>
#include <vector>

namespace divnoise {

void Rational::Normalize() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::FromDouble(double value) {
  Require(std::isfinite(value), "Rational::FromDouble: value must be finite");
  if (value == 0.0) return Rational(0);
  int exp = 0;
  // frexp gives value = mantissa * 2^exp with |mantissa| in [0.5, 1).
  // Scaling the mantissa by 2^53 makes it an exact integer.
  double mantissa = std::frexp(value, &exp);
  auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exp -= 53;
  BigInt num(scaled);
  BigInt den(1);
  if (exp >= 0) {
    num <<= exp;
  } else {
    den <<= -exp;
  }
  return Rational(std::move(num), std::move(den));
}

Rational Rational::Parse(const std::string& text) {
  Require(!text.empty(), "Rational::Parse: empty string");
  auto slash = text.find('/');
  auto parse_int = [](const std::string& s) -> BigInt {
    Require(!s.empty(), "Rational::Parse: empty integer part");
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') i = 1;
    Require(i < s.size(), "Rational::Parse: sign without digits");
    for (; i < s.size(); ++i) {
      Require(std::isdigit(static_cast<unsigned char>(s[i])) != 0,
              "Rational::Parse: invalid character in '" + s + "'");
    }
    return BigInt(s);
  };
  if (slash != std::string::npos) {
    BigInt num = parse_int(text.substr(0, slash));
    BigInt den = parse_int(text.substr(slash + 1));
    Require(den != 0, "Rational::Parse: zero denominator");
    return Rational(std::move(num), std::move(den));
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    return Rational(parse_int(text), BigInt(1));
  }
  std::string head = text.substr(0, dot);
  std::string tail = text.substr(dot + 1);
  bool negative = !head.empty() && head[0] == '-';
  if (head.empty() || head == "-" || head == "+") head += "0";
  Require(!tail.empty(), "Rational::Parse: trailing decimal point");
  BigInt whole = parse_int(head);
  BigInt frac = parse_int(tail);
  BigInt den = 1;
  for (std::size_t i = 0; i < tail.size(); ++i) den *= 10;
  BigInt num = whole * den + (negative ? -frac : frac);
  return Rational(std::move(num), std::move(den));
}

double Rational::ToDouble() const {
  // cpp_int converts to double with correct rounding for values in range.
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::ToString() const {
  if (den_ == 1) return num_.str();
  return num_.str() + "/" + den_.str();
}

namespace {

struct Convergent {
  BigInt p;  // numerator
  BigInt q;  // denominator
};

// Continued-fraction expansion of num/den (num may be negative), producing
// the convergents p_k/q_k.  Terminates because the expansion of a rational
// is finite.  Stops early once q exceeds max_den, returning the last two
// convergents straddling the bound plus the partial quotient at the stop.
struct CfState {
  std::vector<BigInt> quotients;
  std::vector<Convergent> convergents;
  bool exact_within_bound = false;
};

CfState ExpandContinuedFraction(const Rational& x, const BigInt& max_den) {
  CfState st;
  BigInt a = x.num();
  BigInt b = x.den();
  // Standard recurrence p_k = a_k p_{k-1} + p_{k-2} seeded with the
  // conventional virtual convergents p_{-1}/q_{-1} = 1/0, p_{-2}/q_{-2} = 0/1.
  Convergent pm1{1, 0};
  Convergent pm2{0, 1};
  while (true) {
    // Floor division for possibly negative a.
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
    BigInt r = a - q * b;
    Convergent cur{q * pm1.p + pm2.p, q * pm1.q + pm2.q};
    st.quotients.push_back(q);
    st.convergents.push_back(cur);
    if (cur.q > max_den) return st;  // overshot: caller uses semiconvergents
    if (r == 0) {
      st.exact_within_bound = true;
      return st;
    }
    pm2 = pm1;
    pm1 = cur;
    a = b;
    b = r;
  }
}

// Shared implementation: returns the best approximation to `value` with
// denominator <= max_den on the requested side (at_least: result >= value).
Rational BestRationalOnSide(double value, std::uint64_t max_den,
                            bool at_least) {
  Require(max_den >= 1, "BestRational: max_den must be >= 1");
  Rational x = Rational::FromDouble(value);
  BigInt bound(max_den);
  if (x.den() <= bound) return x;  // exactly representable

  CfState st = ExpandContinuedFraction(x, bound);
  // The last convergent overshot the bound; its predecessor fits.  The two
  // candidate best approximations on the two sides of x are the previous
  // convergent and the largest semiconvergent built from it.
  std::size_t k = st.convergents.size() - 1;
  Convergent last = k >= 1 ? st.convergents[k - 1] : Convergent{1, 0};
  Convergent before = k >= 2 ? st.convergents[k - 2] : Convergent{0, 1};
  if (k == 0) {
    // First quotient already overshoots; fall back to floor/ceil over 1.
    BigInt fl = x.num() / x.den();
    if ((x.num() % x.den() != 0) && (x.num() < 0)) fl -= 1;
    if (at_least) return Rational(fl + 1, 1);
    return Rational(fl, 1);
  }
  // Largest j with q_{k-2} + j q_{k-1} <= max_den.
  BigInt j = (bound - before.q) / last.q;
  Convergent semi{before.p + j * last.p, before.q + j * last.q};

  Rational cand1(last.p, last.q);
  Rational cand2(semi.p, semi.q);
  // Convergents alternate sides of x, and the semiconvergent lies on the
  // opposite side from the convergent it extends; exactly one of the two
  // candidates is on each side of x.
  Rational lo = cand1 < cand2 ? cand1 : cand2;
  Rational hi = cand1 < cand2 ? cand2 : cand1;
  if (at_least) {
    Require(hi >= x, "BestRational: internal side invariant failed");
    return hi;
  }
  Require(lo <= x, "BestRational: internal side invariant failed");
  return lo;
}

}  // namespace

Rational BestRationalAtMost(double value, std::uint64_t max_den) {
  return BestRationalOnSide(value, max_den, /*at_least=*/false);
}

Rational BestRationalAtLeast(double value, std::uint64_t max_den) {
  return BestRationalOnSide(value, max_den, /*at_least=*/true);
}

}  // namespace divnoise
