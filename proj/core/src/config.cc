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

#include "mace/config.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mace/errors.h"
#include "text_util.h"

namespace mace {

using nlohmann::ordered_json;

namespace {

// Reads `key` from `j` into `out` if present; records it as known.
template <typename T>
void Take(const ordered_json& j, const char* key, T& out,
          std::set<std::string>& known) {
  known.insert(key);
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("bad value for \"") + key + "\"");
  }
}

void RejectUnknown(const ordered_json& j, const std::set<std::string>& known,
                   const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError("unknown key \"" + where + it.key() + "\"");
    }
  }
}

const ordered_json& Section(const ordered_json& j, const char* key,
                            std::set<std::string>& known) {
  static const ordered_json kEmpty = ordered_json::object();
  known.insert(key);
  auto it = j.find(key);
  if (it == j.end()) return kEmpty;
  if (!it->is_object()) {
    throw ConfigError(std::string("\"") + key + "\" must be an object");
  }
  return *it;
}

}  // namespace

std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kMaceRl: return "mace_rl";
    case Method::kMaceGld: return "mace_gld";
    case Method::kGreedyBaseline: return "greedy_baseline";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  for (Method m : {Method::kMaceRl, Method::kMaceGld, Method::kGreedyBaseline}) {
    if (MethodName(m) == name) return m;
  }
  throw ConfigError("unknown method \"" + std::string(name) + "\"");
}

std::vector<Method> ParseMethods(std::string_view list) {
  std::vector<Method> out;
  for (const auto& part : text::Split(list, ',')) {
    const auto name = text::Trim(part);
    if (!name.empty()) out.push_back(ParseMethod(name));
  }
  if (out.empty()) throw ConfigError("no methods given");
  return out;
}

std::string_view EntropyTermName(EntropyTerm t) {
  switch (t) {
    case EntropyTerm::kPlogP: return "plogp";
    case EntropyTerm::kBernoulli: return "bernoulli";
    case EntropyTerm::kNegated: return "negated";
  }
  return "unknown";
}

EntropyTerm ParseEntropyTerm(std::string_view name) {
  for (auto t : {EntropyTerm::kPlogP, EntropyTerm::kBernoulli,
                 EntropyTerm::kNegated}) {
    if (EntropyTermName(t) == name) return t;
  }
  throw ConfigError("unknown entropy term \"" + std::string(name) + "\"");
}

void PipelineConfig::Validate() const {
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (k_bins < 2) throw ConfigError("k_bins must be >= 2");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must lie in (0, 1)");
  }
  if (max_queries < 1) throw ConfigError("max_queries must be >= 1");
  if (target && *target < 0) throw ConfigError("target must be >= 0");
  if (model_kind != "stumps" && model_kind != "logistic") {
    throw ConfigError("model kind must be \"stumps\" or \"logistic\"");
  }
  if (logistic.epochs < 0 || logistic.learning_rate <= 0) {
    throw ConfigError("invalid logistic options");
  }
  if (stumps.rounds < 0 || stumps.learning_rate <= 0 || stumps.l2 < 0) {
    throw ConfigError("invalid stump options");
  }
  if (candidates.neighbors < 1 || candidates.max_columns < 1 ||
      candidates.max_values < 1) {
    throw ConfigError("K, s and m must be >= 1");
  }
  if (rl.learning_rate <= 0 || rl.batch_size < 1 || rl.epochs < 1 ||
      rl.lambda1 < 0 || rl.lambda2 < 0 || rl.max_features < 1 ||
      rl.samples < 1) {
    throw ConfigError("invalid RL hyperparameters");
  }
  if (rl.sample_cap && *rl.sample_cap < 1) {
    throw ConfigError("sample_cap must be >= 1");
  }
  gld.Validate();
  selection.Validate();
  if (greedy_max_changes < 1) throw ConfigError("max_changes must be >= 1");
}

void PipelineConfig::Validate(const Schema& schema) const {
  Validate();
  ActionableColumns(schema);
  if (target && *target >= schema.ClassCount()) {
    throw ConfigError("target class out of range");
  }
}

std::vector<std::size_t> PipelineConfig::ActionableColumns(
    const Schema& schema) const {
  if (actionable.empty()) return schema.ActionableColumns();
  std::vector<std::size_t> out;
  for (const auto& name : actionable) {
    const auto col = schema.Find(name);
    if (!col) throw ConfigError("unknown actionable column \"" + name + "\"");
    out.push_back(*col);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string PipelineConfig::ToJson() const {
  ordered_json j;
  j["method"] = std::string(MethodName(method));
  j["seed"] = seed;
  j["workers"] = workers;
  j["fine_tune"] = fine_tune;
  j["actionable"] = actionable;
  j["data"] = {{"k_bins", k_bins},
               {"train_fraction", train_fraction},
               {"max_queries", max_queries},
               {"target", target ? ordered_json(*target) : ordered_json()}};
  j["model"] = {
      {"kind", model_kind},
      {"logistic",
       {{"epochs", logistic.epochs}, {"learning_rate", logistic.learning_rate}}},
      {"stumps",
       {{"rounds", stumps.rounds},
        {"learning_rate", stumps.learning_rate},
        {"l2", stumps.l2}}}};
  j["candidates"] = {{"neighbors", candidates.neighbors},
                     {"max_columns", candidates.max_columns},
                     {"max_values", candidates.max_values},
                     {"actionable_only", candidates.actionable_only}};
  j["rl"] = {{"learning_rate", rl.learning_rate},
             {"batch_size", rl.batch_size},
             {"epochs", rl.epochs},
             {"lambda1", rl.lambda1},
             {"lambda2", rl.lambda2},
             {"max_features", rl.max_features},
             {"samples", rl.samples},
             {"entropy", std::string(EntropyTermName(rl.entropy))},
             {"sample_cap",
              rl.sample_cap ? ordered_json(*rl.sample_cap) : ordered_json()}};
  j["gld"] = {{"max_radius", gld.max_radius},
              {"min_radius", gld.min_radius},
              {"epochs", gld.epochs}};
  j["selection"] = {{"k_cap", selection.k_cap}, {"top_n", selection.top_n}};
  j["greedy"] = {{"max_changes", greedy_max_changes}};
  return j.dump(2) + "\n";
}

PipelineConfig PipelineConfig::FromJson(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  PipelineConfig c;
  std::set<std::string> known;
  std::string method_name(MethodName(c.method));
  Take(j, "method", method_name, known);
  c.method = ParseMethod(method_name);
  Take(j, "seed", c.seed, known);
  Take(j, "workers", c.workers, known);
  Take(j, "fine_tune", c.fine_tune, known);
  Take(j, "actionable", c.actionable, known);

  {
    std::set<std::string> k;
    const auto& s = Section(j, "data", known);
    Take(s, "k_bins", c.k_bins, k);
    Take(s, "train_fraction", c.train_fraction, k);
    Take(s, "max_queries", c.max_queries, k);
    k.insert("target");
    if (auto it = s.find("target"); it != s.end() && !it->is_null()) {
      if (!it->is_number_integer()) throw ConfigError("bad value for \"target\"");
      c.target = it->get<int>();
    }
    RejectUnknown(s, k, "data.");
  }
  {
    std::set<std::string> k;
    const auto& s = Section(j, "model", known);
    Take(s, "kind", c.model_kind, k);
    std::set<std::string> kl, ks;
    const auto& l = Section(s, "logistic", k);
    Take(l, "epochs", c.logistic.epochs, kl);
    Take(l, "learning_rate", c.logistic.learning_rate, kl);
    RejectUnknown(l, kl, "model.logistic.");
    const auto& st = Section(s, "stumps", k);
    Take(st, "rounds", c.stumps.rounds, ks);
    Take(st, "learning_rate", c.stumps.learning_rate, ks);
    Take(st, "l2", c.stumps.l2, ks);
    RejectUnknown(st, ks, "model.stumps.");
    RejectUnknown(s, k, "model.");
  }
  {
    std::set<std::string> k;
    const auto& s = Section(j, "candidates", known);
    Take(s, "neighbors", c.candidates.neighbors, k);
    Take(s, "max_columns", c.candidates.max_columns, k);
    Take(s, "max_values", c.candidates.max_values, k);
    Take(s, "actionable_only", c.candidates.actionable_only, k);
    RejectUnknown(s, k, "candidates.");
  }
  {
    std::set<std::string> k;
    const auto& s = Section(j, "rl", known);
    Take(s, "learning_rate", c.rl.learning_rate, k);
    Take(s, "batch_size", c.rl.batch_size, k);
    Take(s, "epochs", c.rl.epochs, k);
    Take(s, "lambda1", c.rl.lambda1, k);
    Take(s, "lambda2", c.rl.lambda2, k);
    Take(s, "max_features", c.rl.max_features, k);
    Take(s, "samples", c.rl.samples, k);
    std::string entropy(EntropyTermName(c.rl.entropy));
    Take(s, "entropy", entropy, k);
    c.rl.entropy = ParseEntropyTerm(entropy);
    k.insert("sample_cap");
    if (auto it = s.find("sample_cap"); it != s.end() && !it->is_null()) {
      if (!it->is_number_integer()) {
        throw ConfigError("bad value for \"sample_cap\"");
      }
      c.rl.sample_cap = it->get<int>();
    }
    RejectUnknown(s, k, "rl.");
  }
  {
    std::set<std::string> k;
    const auto& s = Section(j, "gld", known);
    Take(s, "max_radius", c.gld.max_radius, k);
    Take(s, "min_radius", c.gld.min_radius, k);
    Take(s, "epochs", c.gld.epochs, k);
    RejectUnknown(s, k, "gld.");
  }
  {
    std::set<std::string> k;
    const auto& s = Section(j, "selection", known);
    Take(s, "k_cap", c.selection.k_cap, k);
    Take(s, "top_n", c.selection.top_n, k);
    RejectUnknown(s, k, "selection.");
  }
  {
    std::set<std::string> k;
    const auto& s = Section(j, "greedy", known);
    Take(s, "max_changes", c.greedy_max_changes, k);
    RejectUnknown(s, k, "greedy.");
  }
  RejectUnknown(j, known, "");
  c.Validate();
  return c;
}

PipelineConfig PipelineConfig::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return FromJson(buf.str());
}

}  // namespace mace
