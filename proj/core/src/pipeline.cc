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

#include "mace/pipeline.h"

#include <chrono>
#include <set>

#include "mace/errors.h"
#include "mace/gld.h"
#include "mace/selection.h"

namespace mace {

namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

double ExplanationReport::total_seconds() const {
  double total = 0.0;
  for (const auto& t : timings) total += t.seconds;
  return total;
}

std::mt19937_64 QueryRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

TargetSpec ResolveTarget(const Instance& x, const ClassifierHandle& model,
                         const PipelineConfig& config) {
  const int predicted = model.PredictClass(x);
  if (config.target) {
    TargetSpec t{predicted, *config.target};
    if (t.target >= model.class_count()) {
      throw ConfigError("target class out of range");
    }
    return t;
  }
  if (model.class_count() != 2) {
    throw ConfigError("a target class is required for multi-class models");
  }
  return OppositeOf(predicted);
}

SearchResult RlSearch(const Instance& x, const TargetSpec& target,
                      const ClassifierHandle& model,
                      const CandidateFeatures& candidates,
                      const EncoderState& enc, const PipelineConfig& config,
                      std::mt19937_64& rng) {
  const auto theta =
      ReinforceTrain(x, target, model, candidates, config.rl, rng);
  auto greedy = GreedyConstruct(theta, x, target, model, candidates, enc,
                                config.rl.max_features);
  const auto batch =
      SampleValidBatch(theta, x, target, model, candidates, enc,
                       greedy.example, config.rl.samples, config.rl.sample_cap,
                       rng);
  return {SelectDiverse(batch, config.selection), std::move(greedy.features)};
}

ExplanationReport Explain(const Instance& x, const TargetSpec& target,
                          const ExplainEnv& env, const PipelineConfig& config,
                          std::uint64_t stream) {
  const auto& enc = *env.enc;
  const auto& model = env.model;
  CheckConforms(enc.schema(), x);
  CheckTarget(target, model.class_count());

  ExplanationReport report;
  report.query = x;
  report.target = target;
  report.method = std::string(MethodName(config.method));
  report.config_json = config.ToJson();

  auto start = Clock::now();
  report.probabilities = model.PredictProba(x);
  report.predicted = ArgMax(report.probabilities);
  if (IsTargetPredicted(report.probabilities, target.target)) {
    report.already_target = true;
    report.examples.push_back(MakeExample(x, x, report.probabilities, target,
                                          enc, Provenance::kQuery));
    report.notes.push_back("query is already predicted as the target class");
    report.timings.push_back({"total", Since(start)});
    return report;
  }

  const auto allowed = config.ActionableColumns(enc.schema());
  report.candidates = SelectCandidates(x, target, *env.index, enc,
                                       config.candidates, allowed);
  const auto& cand = report.candidates;
  for (const auto& w : cand.warnings) report.notes.push_back(w);
  report.timings.push_back({"candidates", Since(start)});

  start = Clock::now();
  auto rng = QueryRng(config.seed, stream);
  std::vector<CfExample> pool;
  if (!cand.empty()) {
    switch (config.method) {
      case Method::kMaceRl: {
        auto found = RlSearch(x, target, model, cand, enc, config, rng);
        pool = std::move(found.selected);
        report.policy_features = std::move(found.policy_features);
        break;
      }
      case Method::kMaceGld: {
        report.notes.push_back(
            "mace_gld: GLD feature search variant of this library");
        const auto found = GldOptimize(x, target, model, cand, *env.index, enc,
                                       config.gld, rng);
        pool = SelectDiverse(found, config.selection);
        break;
      }
      case Method::kGreedyBaseline: {
        auto e = GreedyBaseline(x, target, model, cand, enc,
                                config.greedy_max_changes);
        if (!e.valid) {
          report.notes.push_back("greedy baseline did not reach the target");
        }
        pool.push_back(std::move(e));
        break;
      }
    }
  }
  report.timings.push_back({"search", Since(start)});

  start = Clock::now();
  if (config.fine_tune && config.method != Method::kGreedyBaseline) {
    for (auto& e : pool) e = FineTune(x, target, model, e, enc, config.gld, rng);
  }
  SortByProximity(pool);
  {
    std::set<std::vector<double>> seen;
    std::erase_if(pool, [&](const CfExample& e) {
      return !seen.insert(e.instance.values).second;
    });
  }
  if (pool.size() > static_cast<std::size_t>(config.selection.top_n)) {
    pool.resize(static_cast<std::size_t>(config.selection.top_n));
  }
  report.timings.push_back({"fine_tune", Since(start)});

  start = Clock::now();
  if (pool.empty()) {
    const auto nn = env.index->Nearest(target.target, x, enc, 1);
    if (nn.empty()) {
      throw TargetUnreachable("no training row is predicted as class " +
                              std::to_string(target.target));
    }
    pool.push_back(MakeExample(x, env.index->instance(nn.front().row), target,
                               model, enc, Provenance::kFallbackNn));
    report.fallback = true;
    report.notes.push_back(cand.empty()
                               ? "no candidate features; nearest target row"
                               : "search found no valid example; nearest "
                                 "target row");
  }
  // Scores are recomputed against the model so the report never carries a
  // stale validity flag.
  for (auto& e : pool) {
    auto fresh = MakeExample(x, e.instance, target, model, enc, e.provenance);
    fresh.fine_tuned = e.fine_tuned;
    e = std::move(fresh);
  }
  report.examples = std::move(pool);
  report.timings.push_back({"report", Since(start)});
  return report;
}

}  // namespace mace
