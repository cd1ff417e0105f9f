#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 the organmatch authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

// All reported means and ratios are exact rationals so that reports are
// byte-stable and tests can compare without tolerances. Aggregating means
// across many runs needs denominators beyond 64 bits, hence an arbitrary
// precision backend.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace organmatch {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Canonical "p/q" rendering, reduced, q > 0. Integers render as "n/1".
inline std::string fraction_string(const Rational& r)
{
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Decimal rendering rounded half-away-from-zero to `places` digits.
/// Convenience only; the fraction form is the authoritative one.
inline std::string decimal_string(const Rational& r, int places = 6)
{
  BigInt scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;

  const bool negative = r < 0;
  BigInt num = numerator(r);
  if (negative) num = -num;
  const BigInt den = denominator(r);

  // floor((2*num*scale + den) / (2*den)) rounds half up on |r|.
  BigInt scaled = (2 * num * scale + den) / (2 * den);
  BigInt whole = scaled / scale;
  BigInt frac = scaled % scale;

  std::string digits = frac.str();
  digits.insert(digits.begin(), places - digits.size(), '0');

  std::string out;
  if (negative && scaled != 0) out += '-';
  out += whole.str();
  out += '.';
  out += digits;
  return out;
}

}  // namespace organmatch
