/*
 * Copyright 2026 The MACE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mace/synthetic.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "mace/demo_models.h"

namespace mace {

namespace {

enum Col { kAge, kEducation, kGender, kHours, kMarital, kOccupation, kRace, kWorkclass };

// Index of a draw from unnormalized weights.
int Pick(std::mt19937_64& rng, std::initializer_list<double> weights) {
  std::discrete_distribution<int> d(weights);
  return d(rng);
}

}  // namespace

Schema CensusSchema() {
  using K = ColumnKind;
  return Schema(
      {
          {"Age", K::kContinuous, {}, false},
          {"Education",
           K::kCategorical,
           {"Dropout", "HS-grad", "Some-college", "Bachelors", "Masters",
            "Doctorate"},
           true},
          {"Gender", K::kCategorical, {"Female", "Male"}, false},
          {"Working hours", K::kContinuous, {}, true},
          {"Marital",
           K::kCategorical,
           {"Married", "Never-married", "Divorced", "Widowed"},
           true},
          {"Occupation",
           K::kCategorical,
           {"White-Collar", "Blue-Collar", "Service", "Professional", "Sales",
            "Other"},
           true},
          {"Race", K::kCategorical, {"White", "Black", "Asian", "Other"}, false},
          {"Workclass",
           K::kCategorical,
           {"Private", "Self-emp", "Government", "Unemployed"},
           true},
      },
      LabelSpec{"Income", {"<=50K", ">50K"}});
}

Dataset SyntheticCensus(std::size_t rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Dataset d;
  d.schema = CensusSchema();
  d.rows.reserve(rows);
  d.labels.reserve(rows);
  std::normal_distribution<double> age_dist(39.0, 13.0);
  std::normal_distribution<double> hours_dist(40.0, 11.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  static constexpr double kEducationEffect[] = {-1.6, 0.0, 0.5, 1.5, 2.1, 2.7};
  static constexpr double kMaritalEffect[] = {1.7, -0.6, -0.2, -0.4};
  static constexpr double kOccupationEffect[] = {0.9, -0.4, -0.9, 1.2, 0.2, -0.6};
  static constexpr double kWorkclassEffect[] = {0.0, 0.4, 0.2, -2.2};

  for (std::size_t i = 0; i < rows; ++i) {
    Instance x{std::vector<double>(8, 0.0)};
    const double age = std::round(std::clamp(age_dist(rng), 17.0, 90.0));
    x[kAge] = age;
    x[kEducation] = Pick(rng, {0.12, 0.33, 0.23, 0.18, 0.09, 0.05});
    x[kGender] = Pick(rng, {0.33, 0.67});
    double hours = hours_dist(rng);
    if (x[kEducation] >= 3) hours += 3.0;
    x[kHours] = std::round(std::clamp(hours, 1.0, 99.0));
    x[kMarital] = age < 25 ? Pick(rng, {0.15, 0.8, 0.04, 0.01})
                           : Pick(rng, {0.55, 0.22, 0.16, 0.07});
    x[kOccupation] = x[kEducation] >= 3
                         ? Pick(rng, {0.35, 0.08, 0.07, 0.35, 0.12, 0.03})
                         : Pick(rng, {0.15, 0.32, 0.22, 0.06, 0.15, 0.10});
    x[kRace] = Pick(rng, {0.78, 0.11, 0.06, 0.05});
    x[kWorkclass] = Pick(rng, {0.70, 0.11, 0.14, 0.05});

    const double logit =
        -3.3 + 0.035 * (std::min(age, 60.0) - 38.0) +
        kEducationEffect[static_cast<int>(x[kEducation])] +
        0.06 * (x[kHours] - 40.0) + kMaritalEffect[static_cast<int>(x[kMarital])] +
        kOccupationEffect[static_cast<int>(x[kOccupation])] +
        (x[kGender] == 1 ? 0.4 : 0.0) +
        kWorkclassEffect[static_cast<int>(x[kWorkclass])];
    d.labels.push_back(unit(rng) < Sigmoid(logit) ? 1 : 0);
    d.rows.push_back(std::move(x));
  }
  return d;
}

}  // namespace mace
