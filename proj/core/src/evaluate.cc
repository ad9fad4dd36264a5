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

#include <algorithm>
#include <atomic>
#include <thread>

#include "mace/errors.h"
#include "mace/pipeline.h"

namespace mace {

namespace {

struct Job {
  std::size_t id;
  TargetSpec target;
};

}  // namespace

EvaluateResult EvaluateRun(const std::vector<Instance>& queries,
                           const ExplainEnv& env, const PipelineConfig& config,
                           const std::vector<Method>& methods,
                           const std::string& dataset_name) {
  config.Validate(env.enc->schema());
  const auto probs = env.model.PredictProbaMany(queries);
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (jobs.size() >= static_cast<std::size_t>(config.max_queries)) break;
    const int predicted = ArgMax(probs[i]);
    TargetSpec t;
    if (config.target) {
      t = {predicted, *config.target};
    } else {
      if (env.model.class_count() != 2) {
        throw ConfigError("a target class is required for multi-class models");
      }
      t = OppositeOf(predicted);
    }
    if (IsTargetPredicted(probs[i], t.target)) continue;
    jobs.push_back({i, t});
  }

  EvaluateResult out;
  out.table.dataset = dataset_name;
  for (const auto& c : env.enc->schema().columns()) {
    out.table.columns.push_back(c.name);
  }
  for (Method method : methods) {
    PipelineConfig cfg = config;
    cfg.method = method;
    std::vector<ExplanationReport> reports(jobs.size());
    std::vector<QueryResult> results(jobs.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t j = next++; j < jobs.size(); j = next++) {
        const auto& job = jobs[j];
        auto& r = results[j];
        r.query_id = job.id;
        r.query = queries[job.id];
        r.source = job.target.source;
        r.target = job.target.target;
        try {
          reports[j] = Explain(queries[job.id], job.target, env, cfg, job.id);
          r.examples = reports[j].examples;
          r.fallback = reports[j].fallback;
          r.seconds = reports[j].total_seconds();
        } catch (const std::exception& e) {
          r.error = e.what();
          reports[j].query = queries[job.id];
          reports[j].target = job.target;
          reports[j].method = std::string(MethodName(method));
          reports[j].notes.push_back(std::string("error: ") + e.what());
        }
      }
    };
    const auto n_workers = static_cast<std::size_t>(
        std::min<std::size_t>(static_cast<std::size_t>(cfg.workers),
                              std::max<std::size_t>(jobs.size(), 1)));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const auto& r : results) out.any_error = out.any_error || !r.ok();
    out.table.rows.push_back(EvaluateMetrics(std::string(MethodName(method)),
                                             results,
                                             env.enc->schema().size()));
    out.reports.push_back(std::move(reports));
    out.results.push_back(std::move(results));
  }
  return out;
}

}  // namespace mace
