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

#include "mace/candidates.h"

#include <algorithm>
#include <map>

#include "mace/errors.h"

namespace mace {

CandidateFeatures CandidatesFromNeighbors(const Instance& x,
                                          std::span<const Instance> neighbors,
                                          const EncoderState& enc,
                                          int max_columns, int max_values,
                                          std::span<const std::size_t> allowed) {
  const auto& schema = enc.schema();
  std::vector<std::size_t> cols(allowed.begin(), allowed.end());
  if (cols.empty()) {
    for (std::size_t c = 0; c < schema.size(); ++c) cols.push_back(c);
  }
  std::sort(cols.begin(), cols.end());

  std::vector<CandidateColumn> counted;
  for (std::size_t c : cols) {
    const int own = enc.DiscreteKey(c, x[c]);
    std::map<int, int> val_count;
    int col_count = 0;
    for (const auto& z : neighbors) {
      const int key = enc.DiscreteKey(c, z[c]);
      if (key == own) continue;
      ++col_count;
      ++val_count[key];
    }
    if (col_count == 0) continue;
    CandidateColumn cc;
    cc.column = c;
    cc.count = col_count;
    for (const auto& [key, count] : val_count) {
      cc.values.push_back({key, enc.ValueForKey(c, key), count});
    }
    // std::map iterates keys ascending, so a stable sort keeps that order
    // among equal counts.
    std::stable_sort(cc.values.begin(), cc.values.end(),
                     [](const CandidateValue& a, const CandidateValue& b) {
                       return a.count > b.count;
                     });
    if (static_cast<int>(cc.values.size()) > max_values) {
      cc.values.resize(static_cast<std::size_t>(std::max(max_values, 0)));
    }
    if (!cc.values.empty()) counted.push_back(std::move(cc));
  }
  std::stable_sort(counted.begin(), counted.end(),
                   [](const CandidateColumn& a, const CandidateColumn& b) {
                     return a.count > b.count;
                   });
  if (static_cast<int>(counted.size()) > max_columns) {
    counted.resize(static_cast<std::size_t>(std::max(max_columns, 0)));
  }
  CandidateFeatures out;
  out.columns = std::move(counted);
  return out;
}

CandidateFeatures SelectCandidates(const Instance& x, const TargetSpec& target,
                                   const ClassIndex& index,
                                   const EncoderState& enc,
                                   const CandidateOptions& options,
                                   std::span<const std::size_t> allowed) {
  if (options.neighbors < 1) throw ConfigError("K must be >= 1");
  const std::size_t available = index.ClassSize(target.target);
  if (available == 0) {
    throw TargetUnreachable("no training row is predicted as class " +
                            std::to_string(target.target));
  }
  std::vector<std::string> warnings;
  auto k = static_cast<std::size_t>(options.neighbors);
  if (k > available) {
    warnings.push_back("K=" + std::to_string(k) + " capped at " +
                       std::to_string(available) + " target-class rows");
    k = available;
  }
  const auto nearest = index.Nearest(target.target, x, enc, k);
  std::vector<Instance> neighbors;
  std::vector<std::size_t> rows;
  for (const auto& n : nearest) {
    neighbors.push_back(index.instance(n.row));
    rows.push_back(n.row);
  }
  std::vector<std::size_t> cols(allowed.begin(), allowed.end());
  if (cols.empty() && options.actionable_only) {
    cols = enc.schema().ActionableColumns();
  }
  auto out = CandidatesFromNeighbors(x, neighbors, enc, options.max_columns,
                                     options.max_values, cols);
  out.neighbor_rows = std::move(rows);
  out.warnings = std::move(warnings);
  return out;
}

CandidateFeatures RestrictActionable(const CandidateFeatures& candidates,
                                     std::span<const std::size_t> allowed) {
  CandidateFeatures out = candidates;
  out.columns.clear();
  for (const auto& c : candidates.columns) {
    if (std::find(allowed.begin(), allowed.end(), c.column) != allowed.end()) {
      out.columns.push_back(c);
    }
  }
  if (out.columns.size() != candidates.columns.size()) out.rebuild_hint = true;
  return out;
}

}  // namespace mace
