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

// Online allocation mechanisms. Each one sees an arriving organ and the
// current waitlist, and irrevocably picks at most one waiting patient. An
// organ arriving to an empty waitlist is wasted; organs are never banked.
//
// All tie-breaking is total and documented: (arrival_day, id) unless stated
// otherwise, so every mechanism is a pure function of its inputs.

#include "organmatch/population.hpp"
#include "organmatch/rng.hpp"

#include <array>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace organmatch {

enum class MechanismId
{
  fifo,
  greedy,
  rank,
  random,
};

inline std::optional<MechanismId> parse_mechanism(std::string_view name)
{
  if (name == "fifo") return MechanismId::fifo;
  if (name == "greedy") return MechanismId::greedy;
  if (name == "rank") return MechanismId::rank;
  if (name == "random") return MechanismId::random;
  return std::nullopt;
}

inline std::string_view mechanism_name(MechanismId id)
{
  switch (id) {
    case MechanismId::fifo: return "fifo";
    case MechanismId::greedy: return "greedy";
    case MechanismId::rank: return "rank";
    case MechanismId::random: return "random";
  }
  std::abort();
}

/// The full catalogue, ordered by mechanism name. Report assembly iterates
/// this order so output layout never depends on anything else.
inline constexpr std::array<MechanismId, 4> kMechanismsByName = {
  MechanismId::fifo,
  MechanismId::greedy,
  MechanismId::random,
  MechanismId::rank,
};

/// Patients that have arrived and not yet been matched, as of current_day.
struct WaitlistState
{
  std::vector<Patient> waiting;
  int current_day = 0;
};

namespace detail {

inline bool earlier_arrival(const Patient& a, const Patient& b)
{
  if (a.arrival_day != b.arrival_day) return a.arrival_day < b.arrival_day;
  return a.id < b.id;
}

}  // namespace detail

/// Earliest-arrival patient, ties by id. Ignores scores entirely.
inline std::optional<std::string> fifo_assign(const Organ&,
                                              const WaitlistState& state)
{
  const Patient* best = nullptr;
  for (const Patient& p : state.waiting)
    if (!best || detail::earlier_arrival(p, *best)) best = &p;
  if (!best) return std::nullopt;
  return best->id;
}

/// Waiting patient minimizing |kdpi - epts|; ties by (arrival_day, id).
inline std::optional<std::string> greedy_assign(const Organ& organ,
                                                const WaitlistState& state)
{
  const Patient* best = nullptr;
  int best_diff = 0;
  for (const Patient& p : state.waiting) {
    const int diff = std::abs(organ.kdpi - p.epts);
    if (!best || diff < best_diff ||
        (diff == best_diff && detail::earlier_arrival(p, *best))) {
      best = &p;
      best_diff = diff;
    }
  }
  if (!best) return std::nullopt;
  return best->id;
}

/// Percentile-to-percentile matching: sort the waitlist by (epts,
/// arrival_day, id) and pick index round-half-up(kdpi/100 * (n-1)).
/// KDPI 0 takes the lowest-EPTS patient, KDPI 100 the highest.
inline std::optional<std::string> rank_assign(const Organ& organ,
                                              const WaitlistState& state)
{
  if (state.waiting.empty()) return std::nullopt;
  std::vector<const Patient*> order;
  order.reserve(state.waiting.size());
  for (const Patient& p : state.waiting) order.push_back(&p);
  std::sort(order.begin(), order.end(),
            [](const Patient* a, const Patient* b) {
              if (a->epts != b->epts) return a->epts < b->epts;
              return detail::earlier_arrival(*a, *b);
            });
  // round-half-up(kdpi * (n-1) / 100) in exact integer arithmetic.
  const long long n = static_cast<long long>(order.size());
  const long long index = (2LL * organ.kdpi * (n - 1) + 100) / 200;
  return order[static_cast<std::size_t>(index)]->id;
}

/// Uniform choice over the waitlist ordered by (arrival_day, id). Consumes
/// exactly one draw when the waitlist is non-empty, none otherwise.
inline std::optional<std::string> random_assign(const Organ&,
                                                const WaitlistState& state,
                                                RngStream& stream)
{
  if (state.waiting.empty()) return std::nullopt;
  std::vector<const Patient*> order;
  order.reserve(state.waiting.size());
  for (const Patient& p : state.waiting) order.push_back(&p);
  std::sort(order.begin(), order.end(),
            [](const Patient* a, const Patient* b) {
              return detail::earlier_arrival(*a, *b);
            });
  const std::uint64_t index = stream.next_below(order.size());
  return order[static_cast<std::size_t>(index)]->id;
}

inline std::optional<std::string> assign(MechanismId mechanism,
                                         const Organ& organ,
                                         const WaitlistState& state,
                                         RngStream& stream)
{
  switch (mechanism) {
    case MechanismId::fifo: return fifo_assign(organ, state);
    case MechanismId::greedy: return greedy_assign(organ, state);
    case MechanismId::rank: return rank_assign(organ, state);
    case MechanismId::random: return random_assign(organ, state, stream);
  }
  std::abort();
}

}  // namespace organmatch
