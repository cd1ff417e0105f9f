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

// Risk scoring: a raw risk number per donor / recipient profile, then a
// percentile rank against a reference cohort. KDPI is the percentile of a
// donor's raw risk within a donor cohort, EPTS the percentile of a
// recipient's raw risk within a recipient cohort; both land on an integer
// 0..100 scale where a higher score means a higher expected risk than that
// fraction of the cohort.

#include "organmatch/errors.hpp"

#include <span>

namespace organmatch {

/// Linear weights of the raw-risk formulas. The defaults are a documented
/// calibration, not a clinical one; alternative weights drop in here.
struct ScoringWeights
{
  double donor_diabetes = 20.0;
  double recipient_diabetes = 20.0;
  double dialysis_per_year = 2.0;
};

class DonorProfile
{
public:
  DonorProfile(double age_years, bool diabetic)
    : age_(age_years), diabetic_(diabetic)
  {
    if (!(age_ >= 0.0 && age_ <= 130.0))
      throw ValidationError("donor age must be in [0, 130]");
  }

  double age() const noexcept { return age_; }
  bool diabetic() const noexcept { return diabetic_; }

private:
  double age_;
  bool diabetic_;
};

class RecipientProfile
{
public:
  RecipientProfile(double age_years, bool diabetic, double dialysis_years)
    : age_(age_years), diabetic_(diabetic), dialysis_years_(dialysis_years)
  {
    if (!(age_ >= 0.0 && age_ <= 130.0))
      throw ValidationError("recipient age must be in [0, 130]");
    if (!(dialysis_years_ >= 0.0))
      throw ValidationError("dialysis years must be non-negative");
  }

  double age() const noexcept { return age_; }
  bool diabetic() const noexcept { return diabetic_; }
  double dialysis_years() const noexcept { return dialysis_years_; }

private:
  double age_;
  bool diabetic_;
  double dialysis_years_;
};

/// Pre-percentile risk quantity. Only its cohort rank matters downstream.
struct RawRisk
{
  double value = 0.0;
};

/// age + donor_diabetes * [diabetic]. Strictly increasing in age.
inline RawRisk raw_donor_risk(const DonorProfile& profile,
                              const ScoringWeights& weights = {})
{
  return RawRisk{profile.age() +
                 (profile.diabetic() ? weights.donor_diabetes : 0.0)};
}

/// age + recipient_diabetes * [diabetic] + dialysis_per_year * years.
/// Strictly increasing in age and in dialysis years.
inline RawRisk raw_recipient_risk(const RecipientProfile& profile,
                                  const ScoringWeights& weights = {})
{
  return RawRisk{profile.age() +
                 (profile.diabetic() ? weights.recipient_diabetes : 0.0) +
                 weights.dialysis_per_year * profile.dialysis_years()};
}

/// Percentile rank of `value` in `cohort`: floor(100 * |{c < value}| / |cohort|).
/// Strict-less counting, so the cohort minimum scores 0 and a 100-member
/// distinct cohort spans exactly {0..99}; 100 is reachable only for values
/// above every member. Throws on an empty cohort.
inline int percentile_score(RawRisk value, std::span<const RawRisk> cohort)
{
  if (cohort.empty())
    throw ValidationError("percentile_score: empty reference cohort");
  long long below = 0;
  for (const RawRisk& c : cohort)
    if (c.value < value.value) ++below;
  return static_cast<int>(100 * below / static_cast<long long>(cohort.size()));
}

}  // namespace organmatch
