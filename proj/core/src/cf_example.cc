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

#include "mace/cf_example.h"

#include <cmath>

namespace mace {

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kRlGreedy: return "rl_greedy";
    case Provenance::kRlSample: return "rl_sample";
    case Provenance::kGld: return "gld";
    case Provenance::kFallbackNn: return "fallback_nn";
    case Provenance::kBaselineGreedy: return "baseline_greedy";
    case Provenance::kQuery: return "query";
  }
  return "unknown";
}

std::vector<std::size_t> ChangedColumns(const Instance& x, const Instance& cf) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < x.size(); ++c) {
    if (x[c] != cf[c]) out.push_back(c);
  }
  return out;
}

double Proximity(const Instance& x, const Instance& cf, const EncoderState& enc,
                 bool* floored) {
  const auto& schema = enc.schema();
  double categorical = 0.0;
  double continuous = 0.0;
  bool any_floor = false;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (x[c] == cf[c]) continue;
    if (schema.is_categorical(c)) {
      categorical += 1.0;
    } else {
      bool f = false;
      continuous += std::abs(cf[c] - x[c]) / enc.ProximityScale(c, &f);
      any_floor = any_floor || f;
    }
  }
  if (floored) *floored = any_floor;
  return -categorical - continuous;
}

CfExample MakeExample(const Instance& x, Instance cf,
                      std::span<const double> probs, const TargetSpec& target,
                      const EncoderState& enc, Provenance provenance) {
  CfExample e;
  e.changed = ChangedColumns(x, cf);
  e.sparsity = static_cast<int>(e.changed.size());
  e.proximity = Proximity(x, cf, enc, &e.proximity_floored);
  e.valid = IsTargetPredicted(probs, target.target);
  e.target_probability = probs[static_cast<std::size_t>(target.target)];
  e.instance = std::move(cf);
  e.provenance = provenance;
  return e;
}

CfExample MakeExample(const Instance& x, Instance cf, const TargetSpec& target,
                      const ClassifierHandle& model, const EncoderState& enc,
                      Provenance provenance) {
  const auto probs = model.PredictProba(cf);
  return MakeExample(x, std::move(cf), probs, target, enc, provenance);
}

}  // namespace mace
