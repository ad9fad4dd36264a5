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

#include "mace/errors.h"
#include "mace/pipeline.h"

namespace mace {

CfExample GreedyBaseline(const Instance& x, const TargetSpec& target,
                         const ClassifierHandle& model,
                         const CandidateFeatures& candidates,
                         const EncoderState& enc, int max_changes) {
  if (candidates.empty()) throw ConfigError("no candidate features");
  Instance cur = x;
  auto probs = model.PredictProba(cur);
  std::vector<bool> used(candidates.size(), false);
  std::vector<Instance> trials;
  std::vector<std::pair<std::size_t, std::size_t>> moves;
  for (int step = 0; step < max_changes; ++step) {
    if (IsTargetPredicted(probs, target.target)) break;
    trials.clear();
    moves.clear();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      for (std::size_t v = 0; v < candidates[c].values.size(); ++v) {
        Instance t = cur;
        t[candidates[c].column] = candidates[c].values[v].value;
        trials.push_back(std::move(t));
        moves.emplace_back(c, v);
      }
    }
    if (trials.empty()) break;
    const auto scored = model.PredictProbaMany(trials);
    const auto tgt = static_cast<std::size_t>(target.target);
    std::size_t best = 0;
    for (std::size_t i = 1; i < scored.size(); ++i) {
      if (scored[i][tgt] > scored[best][tgt]) best = i;
    }
    used[moves[best].first] = true;
    cur = std::move(trials[best]);
    probs = scored[best];
  }
  return MakeExample(x, std::move(cur), probs, target, enc,
                     Provenance::kBaselineGreedy);
}

}  // namespace mace
