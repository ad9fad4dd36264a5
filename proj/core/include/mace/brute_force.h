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

// Exhaustive solver for
//
//   max f_target(x')  s.t.  x' differs from x in at most w candidate columns,
//                           each changed column takes a candidate value.
//
// Exponential; meant as a reference on small instances.

#ifndef MACE_BRUTE_FORCE_H_
#define MACE_BRUTE_FORCE_H_

#include <cstddef>

#include "mace/candidates.h"
#include "mace/classifier.h"
#include "mace/policy.h"

namespace mace {

inline constexpr std::size_t kBruteForceLimit = 1'000'000;

// sum_{j <= w} C(s, j) * m^j with m the largest value-list length.
std::size_t BruteForceBound(const CandidateFeatures& candidates, int w);

struct BruteForceResult {
  Instance best;
  double score = 0.0;
  std::size_t evaluated = 0;  // assignments scored, including x itself
};

// Enumerates subsets by size, then lexicographically; the first maximizer
// wins ties. Throws Unsupported when BruteForceBound exceeds `limit`.
BruteForceResult BruteForceOptimal(const Instance& x, const TargetSpec& target,
                                   const ClassifierHandle& model,
                                   const CandidateFeatures& candidates, int w,
                                   std::size_t limit = kBruteForceLimit);

// Best objective over deterministic policies: p in {0,1}^s with at most w
// ones and each q one-hot, so each policy emits exactly one action. Returns
// the maximizing action's instance and score. Same limit as above.
BruteForceResult DeterministicPolicyOptimum(const Instance& x,
                                            const TargetSpec& target,
                                            const ClassifierHandle& model,
                                            const CandidateFeatures& candidates,
                                            int w,
                                            std::size_t limit = kBruteForceLimit);

}  // namespace mace

#endif  // MACE_BRUTE_FORCE_H_
