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

// Shared fixtures for the test suites.

#include "organmatch/population.hpp"
#include "organmatch/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace testutil {

/// Uniform random instance: sizes in [0, max_*], scores uniform in [0, 100],
/// arrival days uniform in [0, horizon).
inline organmatch::Instance random_instance(std::uint64_t seed,
                                            int max_patients, int max_organs,
                                            int horizon = 30)
{
  organmatch::RngStream stream(organmatch::mix64(seed));
  organmatch::Instance instance;
  const int patients = static_cast<int>(
    stream.next_below(static_cast<std::uint64_t>(max_patients) + 1));
  const int organs = static_cast<int>(
    stream.next_below(static_cast<std::uint64_t>(max_organs) + 1));
  for (int i = 0; i < patients; ++i) {
    organmatch::Patient p;
    p.id = organmatch::detail::padded_id('p', i + 1, patients);
    p.arrival_day =
      static_cast<int>(stream.next_below(static_cast<std::uint64_t>(horizon)));
    p.epts = static_cast<int>(stream.next_below(101));
    instance.patients.push_back(std::move(p));
  }
  for (int i = 0; i < organs; ++i) {
    organmatch::Organ o;
    o.id = organmatch::detail::padded_id('o', i + 1, organs);
    o.arrival_day =
      static_cast<int>(stream.next_below(static_cast<std::uint64_t>(horizon)));
    o.kdpi = static_cast<int>(stream.next_below(101));
    instance.organs.push_back(std::move(o));
  }
  return organmatch::validate_instance(std::move(instance));
}

/// The 2-patient / 2-organ worked example used across the suites:
/// patients a (EPTS 0, day 0) and b (EPTS 50, day 0); organs x (KDPI 40,
/// day 1) and y (KDPI 45, day 2). Offline optimum pairs x-a and y-b at
/// total cost 45; greedy online pairs x-b and y-a at total cost 55.
inline organmatch::Instance worked_example()
{
  organmatch::Instance instance;
  instance.patients.push_back(organmatch::Patient{"a", 0, 0});
  instance.patients.push_back(organmatch::Patient{"b", 0, 50});
  instance.organs.push_back(organmatch::Organ{"x", 1, 40});
  instance.organs.push_back(organmatch::Organ{"y", 2, 45});
  return organmatch::validate_instance(std::move(instance));
}

/// Two same-day patients, two later organs, built so that the low-EPTS
/// patient gains under greedy by under-reporting: truthful greedy hands
/// A the KDPI-90 organ; reporting 40 wins the KDPI-45 organ instead.
inline organmatch::Instance misreport_example()
{
  organmatch::Instance instance;
  instance.patients.push_back(organmatch::Patient{"A", 0, 30});
  instance.patients.push_back(organmatch::Patient{"B", 0, 50});
  instance.organs.push_back(organmatch::Organ{"o1", 1, 45});
  instance.organs.push_back(organmatch::Organ{"o2", 2, 90});
  return organmatch::validate_instance(std::move(instance));
}

}  // namespace testutil
