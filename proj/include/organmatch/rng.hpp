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

// Deterministic random streams. Everything that consumes randomness in this
// library draws from an explicit RngStream, so a (seed, label) pair pins the
// whole sequence of draws regardless of platform or standard library. The
// generator is SplitMix64; bounded draws use the multiply-high reduction and
// consume exactly one 64-bit draw each.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace organmatch {

/// SplitMix64 finalizer. Also used to spread a combined (seed, label) value
/// over the full 64-bit state space before seeding a stream.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// FNV-1a over the bytes of a label.
constexpr std::uint64_t fnv1a64(std::string_view text) noexcept
{
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

class RngStream
{
public:
  explicit constexpr RngStream(std::uint64_t seed) noexcept : state_(seed) {}

  /// Next raw 64-bit draw (SplitMix64).
  constexpr std::uint64_t next() noexcept
  {
    ++draws_;
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform in [0, n). Multiply-high reduction; exactly one draw. n >= 1.
  constexpr std::uint64_t next_below(std::uint64_t n) noexcept
  {
    return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double next_unit() noexcept
  {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// true with probability p.
  bool next_bernoulli(double p) noexcept { return next_unit() < p; }

  /// Normal via Box-Muller (cosine branch only). Consumes two draws.
  double next_normal(double mean, double sd) noexcept
  {
    // u1 in (0, 1] so the log is finite.
    double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    double u2 = next_unit();
    double z = std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    return mean + sd * z;
  }

  /// Exponential with the given mean. One draw.
  double next_exponential(double mean) noexcept
  {
    return -mean * std::log(1.0 - next_unit());
  }

  /// Number of raw draws consumed so far.
  std::uint64_t draws_consumed() const noexcept { return draws_; }

private:
  std::uint64_t state_;
  std::uint64_t draws_ = 0;
};

/// The documented substream derivation: a stream is identified by the master
/// seed and a purpose label, so independent consumers never share draws.
inline RngStream derive_stream(std::uint64_t master_seed, std::string_view label)
{
  return RngStream(mix64(master_seed ^ fnv1a64(label)));
}

}  // namespace organmatch
