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

// Run configuration. Every field has a default; a config file only needs
// the keys it overrides, and unknown keys are rejected.
//
//   {
//     "method": "mace_rl", "seed": 0, "workers": 1, "fine_tune": true,
//     "actionable": [],
//     "data": {"k_bins": 10, "train_fraction": 0.8, "max_queries": 100,
//              "target": null},
//     "model": {"kind": "stumps", "logistic": {...}, "stumps": {...}},
//     "candidates": {"neighbors": 30, "max_columns": 10, "max_values": 3,
//                    "actionable_only": true},
//     "rl": {"learning_rate": 0.1, "batch_size": 40, "epochs": 15,
//            "lambda1": 2, "lambda2": 2, "max_features": 8, "samples": 80,
//            "entropy": "plogp", "sample_cap": null},
//     "gld": {"max_radius": 0.25, "min_radius": 0.0005, "epochs": 20},
//     "selection": {"k_cap": 3, "top_n": 3},
//     "greedy": {"max_changes": 8}
//   }

#ifndef MACE_CONFIG_H_
#define MACE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mace/candidates.h"
#include "mace/demo_models.h"
#include "mace/gld.h"
#include "mace/reinforce.h"
#include "mace/schema.h"
#include "mace/selection.h"

namespace mace {

enum class Method { kMaceRl, kMaceGld, kGreedyBaseline };

std::string_view MethodName(Method m);
// Throws ConfigError for unknown names.
Method ParseMethod(std::string_view name);
// Comma-separated list, e.g. "mace_rl,greedy_baseline".
std::vector<Method> ParseMethods(std::string_view list);

std::string_view EntropyTermName(EntropyTerm t);
EntropyTerm ParseEntropyTerm(std::string_view name);

struct PipelineConfig {
  Method method = Method::kMaceRl;
  std::uint64_t seed = 0;
  int workers = 1;
  bool fine_tune = true;
  // Column names the explainer may change; empty means the schema's flags.
  std::vector<std::string> actionable;

  int k_bins = kDefaultBins;
  double train_fraction = 0.8;
  int max_queries = 100;
  std::optional<int> target;  // unset: the other class of a binary model

  std::string model_kind = "stumps";  // or "logistic"
  LogisticOptions logistic;
  StumpOptions stumps;

  CandidateOptions candidates;
  RlHyperparams rl;
  GldParams gld;
  SelectionParams selection;
  int greedy_max_changes = 8;

  // Throws ConfigError on out-of-range values.
  void Validate() const;
  // Also checks that named columns exist.
  void Validate(const Schema& schema) const;
  // Indices of the actionable columns under `schema`, ascending.
  std::vector<std::size_t> ActionableColumns(const Schema& schema) const;

  // Every field, including defaults.
  std::string ToJson() const;
  static PipelineConfig FromJson(std::string_view text);
  static PipelineConfig FromFile(const std::filesystem::path& path);
};

}  // namespace mace

#endif  // MACE_CONFIG_H_
