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
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "mace/pipeline.h"

namespace mace {

using nlohmann::ordered_json;

namespace {

std::string ClassName(const Schema& schema, int c) {
  const auto& classes = schema.label().classes;
  if (c >= 0 && static_cast<std::size_t>(c) < classes.size()) {
    return classes[static_cast<std::size_t>(c)];
  }
  return std::to_string(c);
}

std::string Num(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

ordered_json ValueJson(const Schema& schema, std::size_t col, double v) {
  if (schema.is_categorical(col)) return FormatValue(schema, col, v);
  return v;
}

}  // namespace

std::string ReportToText(const ExplanationReport& r, const Schema& schema) {
  std::ostringstream out;
  const auto p = [&](int c) {
    return c >= 0 && static_cast<std::size_t>(c) < r.probabilities.size()
               ? r.probabilities[static_cast<std::size_t>(c)]
               : 0.0;
  };
  out << "method: " << r.method << "\n";
  out << "predicted: " << ClassName(schema, r.predicted) << " (p="
      << Num(p(r.predicted)) << ")  target: "
      << ClassName(schema, r.target.target) << " (p="
      << Num(p(r.target.target)) << ")\n";

  out << "query:\n";
  std::size_t name_w = 0;
  for (const auto& c : schema.columns()) name_w = std::max(name_w, c.name.size());
  for (std::size_t c = 0; c < schema.size() && c < r.query.size(); ++c) {
    const auto& name = schema.column(c).name;
    out << "  " << name << std::string(name_w - name.size(), ' ') << "  "
        << FormatValue(schema, c, r.query[c]) << "\n";
  }

  if (!r.candidates.empty()) {
    out << "candidates:\n";
    for (const auto& cc : r.candidates.columns) {
      out << "  " << schema.column(cc.column).name << " (" << cc.count << "):";
      for (const auto& v : cc.values) {
        out << " " << FormatValue(schema, cc.column, v.value) << " x"
            << v.count;
      }
      out << "\n";
    }
  }
  if (!r.policy_features.empty()) {
    out << "top policy actions:\n";
    for (const auto& f : r.policy_features) {
      out << "  " << schema.column(f.column).name << " -> "
          << FormatValue(schema, f.column, f.value) << "  (p=" << Num(f.p)
          << ", q=" << Num(f.q) << ")\n";
    }
  }

  for (std::size_t i = 0; i < r.examples.size(); ++i) {
    const auto& e = r.examples[i];
    out << "counterfactual " << (i + 1) << " [" << ProvenanceName(e.provenance)
        << (e.valid ? ", valid" : ", INVALID") << ", sparsity " << e.sparsity
        << ", proximity " << Num(e.proximity) << ", p_target "
        << Num(e.target_probability) << (e.fine_tuned ? ", fine-tuned" : "")
        << (e.proximity_floored ? ", median floor" : "") << "]\n";
    for (std::size_t c : e.changed) {
      const auto& name = schema.column(c).name;
      out << "  " << name << std::string(name_w - name.size(), ' ') << "  "
          << FormatValue(schema, c, r.query[c]) << " -> "
          << FormatValue(schema, c, e.instance[c]) << "\n";
    }
  }
  if (r.fallback) out << "fallback: nearest target-class training row\n";
  for (const auto& n : r.notes) out << "note: " << n << "\n";
  if (!r.timings.empty()) {
    out << "timings:";
    for (const auto& t : r.timings) {
      out << " " << t.stage << "=" << Num(t.seconds, 4) << "s";
    }
    out << "\n";
  }
  return out.str();
}

std::string ReportToJson(const ExplanationReport& r, const Schema& schema) {
  ordered_json j;
  j["method"] = r.method;
  ordered_json query = ordered_json::object();
  for (std::size_t c = 0; c < schema.size() && c < r.query.size(); ++c) {
    query[schema.column(c).name] = ValueJson(schema, c, r.query[c]);
  }
  j["query"] = std::move(query);
  j["probabilities"] = r.probabilities;
  j["predicted"] = r.predicted;
  j["target"] = r.target.target;
  j["already_target"] = r.already_target;
  j["fallback"] = r.fallback;

  ordered_json cands = ordered_json::array();
  for (const auto& cc : r.candidates.columns) {
    ordered_json values = ordered_json::array();
    for (const auto& v : cc.values) {
      values.push_back({{"value", ValueJson(schema, cc.column, v.value)},
                        {"count", v.count}});
    }
    cands.push_back({{"column", schema.column(cc.column).name},
                     {"count", cc.count},
                     {"values", std::move(values)}});
  }
  j["candidates"] = std::move(cands);

  ordered_json actions = ordered_json::array();
  for (const auto& f : r.policy_features) {
    actions.push_back({{"column", schema.column(f.column).name},
                       {"value", ValueJson(schema, f.column, f.value)},
                       {"p", f.p},
                       {"q", f.q}});
  }
  j["policy_features"] = std::move(actions);

  ordered_json examples = ordered_json::array();
  for (const auto& e : r.examples) {
    ordered_json changes = ordered_json::array();
    for (std::size_t c : e.changed) {
      changes.push_back({{"column", schema.column(c).name},
                         {"from", ValueJson(schema, c, r.query[c])},
                         {"to", ValueJson(schema, c, e.instance[c])}});
    }
    examples.push_back({{"provenance", std::string(ProvenanceName(e.provenance))},
                        {"valid", e.valid},
                        {"target_probability", e.target_probability},
                        {"sparsity", e.sparsity},
                        {"proximity", e.proximity},
                        {"proximity_floored", e.proximity_floored},
                        {"fine_tuned", e.fine_tuned},
                        {"changes", std::move(changes)}});
  }
  j["examples"] = std::move(examples);
  j["notes"] = r.notes;
  ordered_json timings = ordered_json::object();
  for (const auto& t : r.timings) timings[t.stage] = t.seconds;
  j["timings"] = std::move(timings);
  if (!r.config_json.empty()) {
    j["config"] = ordered_json::parse(r.config_json);
  }
  return j.dump();
}

}  // namespace mace
