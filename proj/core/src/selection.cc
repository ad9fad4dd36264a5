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

#include "mace/selection.h"

#include <algorithm>
#include <map>

#include "mace/errors.h"

namespace mace {

void SelectionParams::Validate() const {
  if (k_cap < 1) throw ConfigError("k_cap must be >= 1");
  if (top_n < 1) throw ConfigError("top_n must be >= 1");
}

void SortByProximity(std::vector<CfExample>& examples) {
  std::stable_sort(examples.begin(), examples.end(),
                   [](const CfExample& a, const CfExample& b) {
                     if (a.proximity != b.proximity) {
                       return a.proximity > b.proximity;
                     }
                     return a.sparsity < b.sparsity;
                   });
}

std::vector<CfExample> SelectDiverse(std::span<const CfExample> examples,
                                     const SelectionParams& params) {
  params.Validate();
  std::vector<CfExample> sorted;
  for (const auto& e : examples) {
    if (e.valid) sorted.push_back(e);
  }
  SortByProximity(sorted);

  std::map<std::size_t, int> used;
  std::vector<CfExample> out;
  for (auto& e : sorted) {
    const bool fits = std::all_of(e.changed.begin(), e.changed.end(),
                                  [&](std::size_t c) {
                                    return used[c] < params.k_cap;
                                  });
    if (!fits) continue;
    for (std::size_t c : e.changed) ++used[c];
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace mace
