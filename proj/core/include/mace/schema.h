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

// Column schema and the instance representation shared by every stage.
//
// An Instance stores one double per column. Categorical columns hold the
// category index (0-based position in the declared category list) and
// continuous columns hold the raw value in the units of the data file.

#ifndef MACE_SCHEMA_H_
#define MACE_SCHEMA_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mace {

enum class ColumnKind { kCategorical, kContinuous };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kContinuous;
  // Declared category values, in index order. Empty for continuous columns.
  std::vector<std::string> categories;
  bool actionable = true;

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

// Name of the label column and, optionally, the textual class names. When
// `classes` is empty the label column holds integer class indices.
struct LabelSpec {
  std::string name = "label";
  std::vector<std::string> classes;

  friend bool operator==(const LabelSpec&, const LabelSpec&) = default;
};

class Schema {
 public:
  Schema() = default;
  // Throws SchemaError when the invariants do not hold: unique non-empty
  // names, >= 2 categories per categorical column, none for continuous, at
  // least one actionable column.
  explicit Schema(std::vector<ColumnSpec> columns, LabelSpec label = {});

  std::size_t size() const { return columns_.size(); }
  const ColumnSpec& column(std::size_t i) const { return columns_.at(i); }
  const std::vector<ColumnSpec>& columns() const { return columns_; }
  const LabelSpec& label() const { return label_; }

  bool is_categorical(std::size_t i) const {
    return columns_[i].kind == ColumnKind::kCategorical;
  }

  std::optional<std::size_t> Find(std::string_view name) const;
  // Like Find, but throws SchemaError for unknown names.
  std::size_t IndexOf(std::string_view name) const;

  // Index of `value` in the declared categories of `col`, or nullopt.
  std::optional<int> CategoryIndex(std::size_t col,
                                   std::string_view value) const;

  std::vector<std::size_t> ActionableColumns() const;
  std::vector<std::size_t> ContinuousColumns() const;
  std::size_t CategoricalWidth() const;  // sum of category counts

  // Number of label classes; 2 when the label spec leaves it implicit.
  int ClassCount() const;

  std::string ToJson() const;
  static Schema FromJson(std::string_view text);
  static Schema FromFile(const std::filesystem::path& path);

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::vector<ColumnSpec> columns_;
  LabelSpec label_;
};

struct Instance {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  friend bool operator==(const Instance&, const Instance&) = default;
};

inline int CategoryOf(const Instance& x, std::size_t col) {
  return static_cast<int>(x.values[col]);
}

// Throws SchemaError if `x` has the wrong width or a categorical entry is
// not a declared category index.
void CheckConforms(const Schema& schema, const Instance& x);

// Text form of a single value: category name or shortest round-trip number.
std::string FormatValue(const Schema& schema, std::size_t col, double value);

// Parses a textual value for `col`. Returns nullopt when the text is not a
// declared category or not a finite number.
std::optional<double> ParseValue(const Schema& schema, std::size_t col,
                                 std::string_view text);

// Applies "name=value" edits, comma separated, on top of `base`.
Instance ApplyEdits(const Schema& schema, Instance base,
                    std::string_view edits);

}  // namespace mace

#endif  // MACE_SCHEMA_H_
