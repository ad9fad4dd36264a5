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

// Gradientless descent over continuous columns.
//
// Each epoch sweeps the radii r_k = R / 2^k, k = 1..K, proposing one
// Gaussian step per radius and keeping only proposals the model still
// predicts as the target class.

#ifndef MACE_GLD_H_
#define MACE_GLD_H_

#include <random>
#include <span>
#include <vector>

#include "mace/candidates.h"
#include "mace/cf_example.h"
#include "mace/classifier.h"
#include "mace/encoders.h"
#include "mace/knn_index.h"

namespace mace {

struct GldParams {
  double max_radius = 0.25;    // R
  double min_radius = 0.0005;  // r
  int epochs = 20;             // T

  // K = ceil(log2(R / r)).
  int Sweeps() const;
  // {R/2, R/4, ..., R/2^K}.
  std::vector<double> Radii() const;
  // Throws ConfigError unless 0 < r < R <= 1 and T >= 1.
  void Validate() const;
};

// Mean normalized distance to `x` over `columns`; 0 when `columns` is empty.
double FineTuneObjective(const Instance& x_norm, const Instance& z_norm,
                         std::span<const std::size_t> columns);

// Pulls the changed continuous columns of `cf` towards `x` in normalized
// space while the target class keeps winning, then resets any of them to
// x's exact value when that keeps the target class. Categorical and unchanged
// columns are never touched. The result is never worse than `cf` under
// FineTuneObjective, nor lower in Proximity. Returns `cf` as is
// (fine_tuned = false) when it is invalid or has no continuous change.
CfExample FineTune(const Instance& x, const TargetSpec& target,
                   const ClassifierHandle& model, const CfExample& cf,
                   const EncoderState& enc, const GldParams& params,
                   std::mt19937_64& rng);

// Counterfactual search by gradientless descent, a variant of this library:
// it starts from the first neighbour in `candidates.neighbor_rows` whose
// candidate-column values make x valid, then each proposal reverts every
// changed column to x's value with probability r_k / R and moves changed
// continuous columns by a Gaussian step of radius r_k. Returns the feasible
// examples not dominated in (sparsity, proximity), best objective first.
// Empty when no neighbour gives a valid start.
std::vector<CfExample> GldOptimize(const Instance& x, const TargetSpec& target,
                                   const ClassifierHandle& model,
                                   const CandidateFeatures& candidates,
                                   const ClassIndex& index,
                                   const EncoderState& enc,
                                   const GldParams& params,
                                   std::mt19937_64& rng);

// (1/d)(categorical changes + sum |delta| / |median|), d = column count.
double GldObjective(const Instance& x, const Instance& cf,
                    const EncoderState& enc);

}  // namespace mace

#endif  // MACE_GLD_H_
