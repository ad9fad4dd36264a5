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

// End-to-end explanation of a query:
//
//   candidates -> policy search (or GLD search) -> diverse selection
//              -> continuous fine-tuning -> report
//
// When the search yields nothing valid, the nearest training row predicted
// as the target class is returned instead and the report says so.

#ifndef MACE_PIPELINE_H_
#define MACE_PIPELINE_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mace/candidates.h"
#include "mace/cf_example.h"
#include "mace/classifier.h"
#include "mace/config.h"
#include "mace/encoders.h"
#include "mace/knn_index.h"
#include "mace/metrics.h"
#include "mace/reinforce.h"

namespace mace {

// Read-only state shared by every query.
struct ExplainEnv {
  const EncoderState* enc = nullptr;
  const ClassIndex* index = nullptr;
  ClassifierHandle model;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct ExplanationReport {
  Instance query;
  std::vector<double> probabilities;
  int predicted = 0;
  TargetSpec target;
  std::string method;
  CandidateFeatures candidates;
  // Top policy features (mace_rl only), descending p.
  std::vector<FeatureChoice> policy_features;
  // Selected examples, best first; at most top_n.
  std::vector<CfExample> examples;
  bool already_target = false;
  bool fallback = false;
  std::vector<std::string> notes;
  std::vector<StageTiming> timings;
  std::string config_json;

  double total_seconds() const;
};

// Engine for one query; `rng` drives every random choice.
struct SearchResult {
  std::vector<CfExample> selected;  // diverse selection, not yet truncated
  std::vector<FeatureChoice> policy_features;
};
SearchResult RlSearch(const Instance& x, const TargetSpec& target,
                      const ClassifierHandle& model,
                      const CandidateFeatures& candidates,
                      const EncoderState& enc, const PipelineConfig& config,
                      std::mt19937_64& rng);

// Applies the single (column, value) change that raises f_target the most,
// never revisiting a column, until the target wins or `max_changes` columns
// have changed. The result may be invalid.
CfExample GreedyBaseline(const Instance& x, const TargetSpec& target,
                         const ClassifierHandle& model,
                         const CandidateFeatures& candidates,
                         const EncoderState& enc, int max_changes);

// Generator for query number `stream` under `seed`; independent of which
// thread runs the query.
std::mt19937_64 QueryRng(std::uint64_t seed, std::uint64_t stream);

// Throws TargetUnreachable when no training row is predicted as the target.
ExplanationReport Explain(const Instance& x, const TargetSpec& target,
                          const ExplainEnv& env, const PipelineConfig& config,
                          std::uint64_t stream = 0);

// Target for query `x`: config.target when set, else the other class of a
// binary model. Throws ConfigError for multi-class models without a target.
TargetSpec ResolveTarget(const Instance& x, const ClassifierHandle& model,
                         const PipelineConfig& config);

struct EvaluateResult {
  MetricsTable table;
  // Indexed like `methods`, then by explained query.
  std::vector<std::vector<ExplanationReport>> reports;
  std::vector<std::vector<QueryResult>> results;
  bool any_error = false;
};

// Explains every query whose prediction differs from its target, up to
// config.max_queries, with each method in turn, on config.workers threads.
// Per-query failures are recorded, never thrown.
EvaluateResult EvaluateRun(const std::vector<Instance>& queries,
                           const ExplainEnv& env, const PipelineConfig& config,
                           const std::vector<Method>& methods,
                           const std::string& dataset_name);

// Human-readable report: original and counterfactual values per changed
// column.
std::string ReportToText(const ExplanationReport& report,
                         const Schema& schema);
// One JSON object, no trailing newline.
std::string ReportToJson(const ExplanationReport& report,
                         const Schema& schema);

}  // namespace mace

#endif  // MACE_PIPELINE_H_
