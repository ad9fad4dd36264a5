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

#ifndef MACE_CF_EXAMPLE_H_
#define MACE_CF_EXAMPLE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mace/classifier.h"
#include "mace/encoders.h"

namespace mace {

enum class Provenance { kRlGreedy, kRlSample, kGld, kFallbackNn, kBaselineGreedy, kQuery };

std::string_view ProvenanceName(Provenance p);

// A candidate counterfactual together with its scores against the query.
struct CfExample {
  Instance instance;
  bool valid = false;
  double target_probability = 0.0;
  std::vector<std::size_t> changed;  // ascending column indices
  int sparsity = 0;
  double proximity = 0.0;  // <= 0; 0 iff instance == query
  bool proximity_floored = false;  // a zero median hit the divisor floor
  bool fine_tuned = false;
  Provenance provenance = Provenance::kRlSample;
};

// Columns where `cf` differs from `x` (exact comparison).
std::vector<std::size_t> ChangedColumns(const Instance& x, const Instance& cf);

// -(categorical changes) - sum over continuous columns |cf - x| / |median|,
// in raw units. A column whose median is zero uses the floor 1e-9 instead
// and sets *floored.
double Proximity(const Instance& x, const Instance& cf, const EncoderState& enc,
                 bool* floored = nullptr);

// Scores `cf` against `x` and the model.
CfExample MakeExample(const Instance& x, Instance cf, const TargetSpec& target,
                      const ClassifierHandle& model, const EncoderState& enc,
                      Provenance provenance);
// Same, when the target probability is already known.
CfExample MakeExample(const Instance& x, Instance cf,
                      std::span<const double> probs, const TargetSpec& target,
                      const EncoderState& enc, Provenance provenance);

}  // namespace mace

#endif  // MACE_CF_EXAMPLE_H_
