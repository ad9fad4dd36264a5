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

// Census-style synthetic data: eight columns modelled loosely on the UCI
// Adult data, with income drawn from a fixed logistic rule.

#ifndef MACE_SYNTHETIC_H_
#define MACE_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>

#include "mace/dataset.h"

namespace mace {

// Age, Education, Gender, Working hours, Marital, Occupation, Race,
// Workclass; label "Income" with classes "<=50K" and ">50K". Age, Gender and
// Race are not actionable.
Schema CensusSchema();

Dataset SyntheticCensus(std::size_t rows, std::uint64_t seed);

}  // namespace mace

#endif  // MACE_SYNTHETIC_H_
