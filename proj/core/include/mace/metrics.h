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

// Aggregate quality metrics over explained queries.

#ifndef MACE_METRICS_H_
#define MACE_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mace/cf_example.h"

namespace mace {

// The outcome of explaining one query with one method.
struct QueryResult {
  std::size_t query_id = 0;
  Instance query;
  int source = 0;
  int target = 1;
  std::vector<CfExample> examples;  // best first
  bool fallback = false;
  std::string error;  // non-empty when the query failed outright
  double seconds = 0.0;

  bool ok() const { return error.empty(); }
};

// Mean fraction of columns that differ over all pairs of `examples`;
// nullopt with fewer than two examples.
std::optional<double> PairwiseDiversity(std::span<const CfExample> examples);

struct MethodMetrics {
  std::string method;
  std::size_t queries = 0;
  double validity = 0.0;   // share of queries whose top example is valid
  double sparsity = 0.0;   // mean changes of top examples
  double proximity = 0.0;  // mean proximity of top examples
  std::optional<double> diversity;  // over queries with >= 2 examples
  // Per column: share of queries whose top example changes it.
  std::vector<double> change_frequency;
  std::size_t fallbacks = 0;
  std::size_t errors = 0;
  double seconds_per_query = 0.0;
};

// Failed queries count as invalid and are left out of the means.
MethodMetrics EvaluateMetrics(const std::string& method,
                              std::span<const QueryResult> results,
                              std::size_t column_count);

struct MetricsTable {
  std::string dataset;
  std::vector<std::string> columns;
  std::vector<MethodMetrics> rows;

  // Aligned, human-readable table.
  std::string ToText() const;
  // One JSON object per line: {"dataset","method","metric","value"}.
  // Timings are excluded so equal runs give equal bytes.
  std::string ToRecords() const;
  // Same shape, only the seconds_per_query metric.
  std::string TimingRecords() const;
};

}  // namespace mace

#endif  // MACE_METRICS_H_
