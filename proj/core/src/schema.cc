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

#include "mace/schema.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mace/errors.h"
#include "text_util.h"

namespace mace {

using nlohmann::json;

Schema::Schema(std::vector<ColumnSpec> columns, LabelSpec label)
    : columns_(std::move(columns)), label_(std::move(label)) {
  if (columns_.empty()) throw SchemaError("schema has no columns");
  std::set<std::string> seen;
  bool any_actionable = false;
  for (const auto& col : columns_) {
    if (col.name.empty()) throw SchemaError("column with empty name");
    if (!seen.insert(col.name).second) {
      throw SchemaError("duplicate column name '" + col.name + "'");
    }
    if (col.kind == ColumnKind::kCategorical) {
      if (col.categories.size() < 2) {
        throw SchemaError("categorical column '" + col.name +
                          "' needs at least 2 categories");
      }
      std::set<std::string> cats(col.categories.begin(), col.categories.end());
      if (cats.size() != col.categories.size()) {
        throw SchemaError("duplicate category in column '" + col.name + "'");
      }
    } else if (!col.categories.empty()) {
      throw SchemaError("continuous column '" + col.name +
                        "' must not declare categories");
    }
    any_actionable = any_actionable || col.actionable;
  }
  if (!any_actionable) throw SchemaError("no actionable column");
  if (label_.name.empty()) throw SchemaError("label column has empty name");
  if (seen.count(label_.name)) {
    throw SchemaError("label column '" + label_.name +
                      "' collides with a feature column");
  }
  if (!label_.classes.empty() && label_.classes.size() < 2) {
    throw SchemaError("label needs at least 2 classes");
  }
}

std::optional<std::size_t> Schema::Find(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Schema::IndexOf(std::string_view name) const {
  auto idx = Find(name);
  if (!idx) throw SchemaError("unknown column '" + std::string(name) + "'");
  return *idx;
}

std::optional<int> Schema::CategoryIndex(std::size_t col,
                                         std::string_view value) const {
  const auto& cats = columns_.at(col).categories;
  for (std::size_t i = 0; i < cats.size(); ++i) {
    if (cats[i] == value) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::vector<std::size_t> Schema::ActionableColumns() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].actionable) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Schema::ContinuousColumns() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (!is_categorical(i)) out.push_back(i);
  }
  return out;
}

std::size_t Schema::CategoricalWidth() const {
  std::size_t w = 0;
  for (const auto& c : columns_) w += c.categories.size();
  return w;
}

int Schema::ClassCount() const {
  return label_.classes.empty() ? 2 : static_cast<int>(label_.classes.size());
}

std::string Schema::ToJson() const {
  json cols = json::array();
  for (const auto& c : columns_) {
    json j = {{"name", c.name},
              {"kind", c.kind == ColumnKind::kCategorical ? "categorical"
                                                          : "continuous"},
              {"actionable", c.actionable}};
    if (!c.categories.empty()) j["categories"] = c.categories;
    cols.push_back(std::move(j));
  }
  json label = {{"name", label_.name}};
  if (!label_.classes.empty()) label["classes"] = label_.classes;
  return json{{"columns", cols}, {"label", label}}.dump(2);
}

Schema Schema::FromJson(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("schema is not valid JSON: ") + e.what());
  }
  try {
    std::vector<ColumnSpec> cols;
    for (const auto& jc : j.at("columns")) {
      ColumnSpec c;
      c.name = jc.at("name").get<std::string>();
      const auto kind = jc.at("kind").get<std::string>();
      if (kind == "categorical") {
        c.kind = ColumnKind::kCategorical;
      } else if (kind == "continuous") {
        c.kind = ColumnKind::kContinuous;
      } else {
        throw SchemaError("column '" + c.name + "': unknown kind '" + kind +
                          "'");
      }
      if (jc.contains("categories")) {
        c.categories = jc.at("categories").get<std::vector<std::string>>();
      }
      c.actionable = jc.value("actionable", true);
      cols.push_back(std::move(c));
    }
    LabelSpec label;
    if (j.contains("label")) {
      const auto& jl = j.at("label");
      if (jl.is_string()) {
        label.name = jl.get<std::string>();
      } else {
        label.name = jl.at("name").get<std::string>();
        if (jl.contains("classes")) {
          label.classes = jl.at("classes").get<std::vector<std::string>>();
        }
      }
    }
    return Schema(std::move(cols), std::move(label));
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed schema: ") + e.what());
  }
}

Schema Schema::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open schema file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return FromJson(ss.str());
}

void CheckConforms(const Schema& schema, const Instance& x) {
  if (x.size() != schema.size()) {
    throw SchemaError("instance has " + std::to_string(x.size()) +
                      " values, schema has " + std::to_string(schema.size()) +
                      " columns");
  }
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const double v = x[i];
    if (!std::isfinite(v)) {
      throw SchemaError("non-finite value in column '" +
                        schema.column(i).name + "'");
    }
    if (schema.is_categorical(i)) {
      const auto n = static_cast<double>(schema.column(i).categories.size());
      if (v != std::floor(v) || v < 0 || v >= n) {
        throw SchemaError("column '" + schema.column(i).name +
                          "': not a declared category index");
      }
    }
  }
}

std::string FormatValue(const Schema& schema, std::size_t col, double value) {
  if (schema.is_categorical(col)) {
    return schema.column(col).categories.at(static_cast<std::size_t>(value));
  }
  return text::FormatNumber(value);
}

std::optional<double> ParseValue(const Schema& schema, std::size_t col,
                                 std::string_view text) {
  const auto t = text::Trim(text);
  if (schema.is_categorical(col)) {
    auto idx = schema.CategoryIndex(col, t);
    if (!idx) return std::nullopt;
    return static_cast<double>(*idx);
  }
  return text::ParseNumber(t);
}

Instance ApplyEdits(const Schema& schema, Instance base,
                    std::string_view edits) {
  for (const auto& item : text::Split(edits, ',')) {
    const auto trimmed = text::Trim(item);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string_view::npos) {
      throw SchemaError("edit '" + std::string(trimmed) +
                        "' is not of the form name=value");
    }
    const auto col = schema.IndexOf(text::Trim(trimmed.substr(0, eq)));
    const auto value = ParseValue(schema, col, trimmed.substr(eq + 1));
    if (!value) {
      throw SchemaError("edit '" + std::string(trimmed) +
                        "': value not valid for column '" +
                        schema.column(col).name + "'");
    }
    base[col] = *value;
  }
  return base;
}

}  // namespace mace
