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

#include "organmatch/rational.hpp"
#include "organmatch/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>

using organmatch::RngStream;

TEST_CASE("splitmix64 known-answer vectors")
{
  // Frozen from an independent reference implementation.
  RngStream zero(0);
  CHECK(zero.next() == 0xE220A8397B1DCDAFULL);
  CHECK(zero.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(zero.next() == 0x06C45D188009454FULL);

  RngStream forty_two(42);
  CHECK(forty_two.next() == 0xBDD732262FEB6E95ULL);
  CHECK(forty_two.next() == 0x28EFE333B266F103ULL);
}

TEST_CASE("fnv1a64 known-answer")
{
  CHECK(organmatch::fnv1a64("random_assign") == 0x77DAB29B5905D81EULL);
}

TEST_CASE("streams are reproducible and label-separated")
{
  RngStream a = organmatch::derive_stream(7, "donor_age");
  RngStream b = organmatch::derive_stream(7, "donor_age");
  RngStream c = organmatch::derive_stream(7, "recipient_age");
  bool diverged = false;
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t draw = a.next();
    CHECK(draw == b.next());
    if (draw != c.next()) diverged = true;
  }
  CHECK(diverged);
}

TEST_CASE("bounded draws stay in range and count draws")
{
  RngStream stream(123);
  for (std::uint64_t n : {1ULL, 2ULL, 7ULL, 100ULL, 12345ULL}) {
    for (int i = 0; i < 64; ++i) {
      CHECK(stream.next_below(n) < n);
    }
  }
  CHECK(stream.draws_consumed() == 5 * 64);
}

TEST_CASE("unit doubles are in [0, 1)")
{
  RngStream stream(99);
  for (int i = 0; i < 1000; ++i) {
    const double u = stream.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal and exponential draws look sane")
{
  RngStream stream(2024);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) sum += stream.next_normal(10.0, 2.0);
  CHECK(sum / n == Catch::Approx(10.0).margin(0.1));

  double exp_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = stream.next_exponential(3.0);
    CHECK(x >= 0.0);
    exp_sum += x;
  }
  CHECK(exp_sum / n == Catch::Approx(3.0).margin(0.15));
}

TEST_CASE("rational rendering")
{
  using organmatch::Rational;
  CHECK(organmatch::fraction_string(Rational(55, 45)) == "11/9");
  CHECK(organmatch::fraction_string(Rational(4)) == "4/1");
  CHECK(organmatch::decimal_string(Rational(11, 9)) == "1.222222");
  CHECK(organmatch::decimal_string(Rational(55, 2)) == "27.500000");
  CHECK(organmatch::decimal_string(Rational(0)) == "0.000000");
  CHECK(organmatch::decimal_string(Rational(1, 2)) == "0.500000");
  // Half-way cases round away from zero at the sixth place.
  CHECK(organmatch::decimal_string(Rational(1, 2000000)) == "0.000001");
  CHECK(organmatch::decimal_string(Rational(-1, 2000000)) == "-0.000001");
  CHECK(organmatch::decimal_string(Rational(-11, 9)) == "-1.222222");
}
