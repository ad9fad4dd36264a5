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

#ifndef MACE_SELECTION_H_
#define MACE_SELECTION_H_

#include <span>
#include <vector>

#include "mace/cf_example.h"

namespace mace {

struct SelectionParams {
  int k_cap = 3;  // max examples changing any one column
  int top_n = 3;  // examples reported per query

  // Throws ConfigError unless both are >= 1.
  void Validate() const;
};

// Sorts `examples` by proximity, highest first (ties: fewer changes, then
// input order).
void SortByProximity(std::vector<CfExample>& examples);

// Drops invalid examples, sorts the rest by proximity and keeps an example
// only while every column it changes has been used fewer than k_cap times.
// Does not truncate to top_n.
std::vector<CfExample> SelectDiverse(std::span<const CfExample> examples,
                                     const SelectionParams& params);

}  // namespace mace

#endif  // MACE_SELECTION_H_
