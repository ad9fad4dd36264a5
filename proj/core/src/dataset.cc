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

#include "mace/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "mace/errors.h"
#include "text_util.h"

namespace mace {

void ValidateDataset(const Dataset& data) {
  if (data.rows.empty()) throw SchemaError("dataset has no rows");
  if (data.labels.size() != data.rows.size()) {
    throw SchemaError("dataset has " + std::to_string(data.rows.size()) +
                      " rows but " + std::to_string(data.labels.size()) +
                      " labels");
  }
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    try {
      CheckConforms(data.schema, data.rows[r]);
    } catch (const SchemaError& e) {
      throw RowError(r + 2, e.what());
    }
  }
}

namespace {

int ParseLabel(const LabelSpec& spec, std::string_view text, std::size_t line) {
  if (!spec.classes.empty()) {
    for (std::size_t i = 0; i < spec.classes.size(); ++i) {
      if (spec.classes[i] == text) return static_cast<int>(i);
    }
    throw RowError(line, "unknown label '" + std::string(text) + "'");
  }
  const auto v = text::ParseNumber(text);
  if (!v || *v < 0 || *v != std::floor(*v)) {
    throw RowError(line, "label '" + std::string(text) +
                             "' is not a class index");
  }
  return static_cast<int>(*v);
}

}  // namespace

Dataset ReadCsv(std::istream& in, const Schema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("data file is empty");
  const auto header = text::SplitCsvLine(line);

  // Position of each schema column (and the label) in the file.
  std::vector<std::size_t> source(schema.size());
  std::size_t label_pos = header.size();
  for (std::size_t c = 0; c < schema.size(); ++c) {
    auto it = std::find(header.begin(), header.end(), schema.column(c).name);
    if (it == header.end()) {
      throw SchemaError("missing column '" + schema.column(c).name +
                        "' in header");
    }
    source[c] = static_cast<std::size_t>(it - header.begin());
  }
  {
    auto it = std::find(header.begin(), header.end(), schema.label().name);
    if (it == header.end()) {
      throw SchemaError("missing label column '" + schema.label().name +
                        "' in header");
    }
    label_pos = static_cast<std::size_t>(it - header.begin());
  }

  Dataset data;
  data.schema = schema;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    const auto fields = text::SplitCsvLine(line);
    if (fields.size() != header.size()) {
      throw RowError(line_no, "expected " + std::to_string(header.size()) +
                                  " fields, found " +
                                  std::to_string(fields.size()));
    }
    Instance x;
    x.values.resize(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
      const auto& field = fields[source[c]];
      const auto v = ParseValue(schema, c, field);
      if (!v) {
        if (schema.is_categorical(c)) {
          throw RowError(line_no, "unknown category '" + field +
                                      "' in column '" +
                                      schema.column(c).name + "'");
        }
        throw RowError(line_no, "cannot parse '" + field + "' in column '" +
                                    schema.column(c).name + "'");
      }
      x[c] = *v;
    }
    data.labels.push_back(ParseLabel(schema.label(), fields[label_pos], line_no));
    data.rows.push_back(std::move(x));
  }
  if (data.rows.empty()) throw SchemaError("data file has no rows");
  return data;
}

Dataset LoadDataset(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open data file " + path.string());
  return ReadCsv(in, schema);
}

void WriteCsv(std::ostream& out, const Dataset& data) {
  const auto& schema = data.schema;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    out << text::CsvEscape(schema.column(c).name) << ',';
  }
  out << text::CsvEscape(schema.label().name) << '\n';
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    for (std::size_t c = 0; c < schema.size(); ++c) {
      out << text::CsvEscape(FormatValue(schema, c, data.rows[r][c])) << ',';
    }
    const int label = data.labels[r];
    if (schema.label().classes.empty()) {
      out << label;
    } else {
      out << text::CsvEscape(schema.label().classes.at(label));
    }
    out << '\n';
  }
}

void SaveDataset(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write " + path.string());
  WriteCsv(out, data);
}

std::pair<Dataset, Dataset> SplitDataset(const Dataset& data,
                                         double train_fraction,
                                         std::uint64_t seed) {
  const std::size_t n = data.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  auto n_train = static_cast<std::size_t>(std::llround(train_fraction * n));
  if (n >= 2) n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  Dataset train{data.schema, {}, {}};
  Dataset test{data.schema, {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    auto& dst = i < n_train ? train : test;
    dst.rows.push_back(data.rows[order[i]]);
    dst.labels.push_back(data.labels[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace mace
