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

#include "mace/metrics.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace mace {

namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void Record(std::ostringstream& out, const std::string& dataset,
            const std::string& method, const std::string& metric,
            double value) {
  nlohmann::ordered_json j;
  j["dataset"] = dataset;
  j["method"] = method;
  j["metric"] = metric;
  j["value"] = value;
  out << j.dump() << '\n';
}

}  // namespace

std::optional<double> PairwiseDiversity(std::span<const CfExample> examples) {
  const std::size_t k = examples.size();
  if (k < 2) return std::nullopt;
  const std::size_t d = examples[0].instance.size();
  if (d == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      std::size_t diff = 0;
      for (std::size_t f = 0; f < d; ++f) {
        if (examples[i].instance[f] != examples[j].instance[f]) ++diff;
      }
      total += static_cast<double>(diff) / static_cast<double>(d);
    }
  }
  return 2.0 * total / static_cast<double>(k * (k - 1));
}

MethodMetrics EvaluateMetrics(const std::string& method,
                              std::span<const QueryResult> results,
                              std::size_t column_count) {
  MethodMetrics m;
  m.method = method;
  m.queries = results.size();
  m.change_frequency.assign(column_count, 0.0);
  std::size_t valid = 0, scored = 0, diverse = 0;
  double sparsity = 0.0, proximity = 0.0, diversity = 0.0, seconds = 0.0;
  for (const auto& r : results) {
    seconds += r.seconds;
    if (r.fallback) ++m.fallbacks;
    if (!r.ok()) {
      ++m.errors;
      continue;
    }
    if (r.examples.empty()) continue;
    const auto& top = r.examples.front();
    ++scored;
    if (top.valid) ++valid;
    sparsity += top.sparsity;
    proximity += top.proximity;
    for (std::size_t c : top.changed) {
      if (c < column_count) m.change_frequency[c] += 1.0;
    }
    if (auto d = PairwiseDiversity(r.examples)) {
      diversity += *d;
      ++diverse;
    }
  }
  if (m.queries > 0) {
    const auto n = static_cast<double>(m.queries);
    m.validity = static_cast<double>(valid) / n;
    m.seconds_per_query = seconds / n;
    for (double& f : m.change_frequency) f /= n;
  }
  if (scored > 0) {
    m.sparsity = sparsity / static_cast<double>(scored);
    m.proximity = proximity / static_cast<double>(scored);
  }
  if (diverse > 0) m.diversity = diversity / static_cast<double>(diverse);
  return m;
}

std::string MetricsTable::ToText() const {
  std::ostringstream out;
  const std::vector<std::string> header{"method",    "queries",   "validity",
                                        "sparsity",  "proximity", "diversity",
                                        "fallbacks", "errors",    "sec/query"};
  std::vector<std::vector<std::string>> cells{header};
  for (const auto& r : rows) {
    cells.push_back({r.method, std::to_string(r.queries), Fixed(r.validity, 2),
                     Fixed(r.sparsity, 2), Fixed(r.proximity, 3),
                     r.diversity ? Fixed(*r.diversity, 3) : "-",
                     std::to_string(r.fallbacks), std::to_string(r.errors),
                     Fixed(r.seconds_per_query, 4)});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  }
  out << "dataset: " << dataset << "\n";
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == 0) {
        out << row[i] << std::string(width[i] - row[i].size(), ' ');
      } else {
        out << "  " << std::string(width[i] - row[i].size(), ' ') << row[i];
      }
    }
    out << "\n";
  }
  if (!rows.empty() && !columns.empty()) {
    out << "\nchange frequency of top examples\n";
    std::size_t name_w = 6;
    for (const auto& c : columns) name_w = std::max(name_w, c.size());
    out << "column" << std::string(name_w - 6, ' ');
    for (const auto& r : rows) out << "  " << r.method;
    out << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << columns[c] << std::string(name_w - columns[c].size(), ' ');
      for (const auto& r : rows) {
        const std::string v = Fixed(r.change_frequency[c], 2);
        out << "  " << std::string(r.method.size() > v.size()
                                       ? r.method.size() - v.size()
                                       : 0,
                                   ' ')
            << v;
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string MetricsTable::ToRecords() const {
  std::ostringstream out;
  for (const auto& r : rows) {
    Record(out, dataset, r.method, "queries", static_cast<double>(r.queries));
    Record(out, dataset, r.method, "validity", r.validity);
    Record(out, dataset, r.method, "sparsity", r.sparsity);
    Record(out, dataset, r.method, "proximity", r.proximity);
    if (r.diversity) Record(out, dataset, r.method, "diversity", *r.diversity);
    Record(out, dataset, r.method, "fallbacks",
           static_cast<double>(r.fallbacks));
    Record(out, dataset, r.method, "errors", static_cast<double>(r.errors));
    for (std::size_t c = 0; c < r.change_frequency.size(); ++c) {
      const std::string name =
          c < columns.size() ? columns[c] : std::to_string(c);
      Record(out, dataset, r.method, "change_frequency/" + name,
             r.change_frequency[c]);
    }
  }
  return out.str();
}

std::string MetricsTable::TimingRecords() const {
  std::ostringstream out;
  for (const auto& r : rows) {
    Record(out, dataset, r.method, "seconds_per_query", r.seconds_per_query);
  }
  return out.str();
}

}  // namespace mace
