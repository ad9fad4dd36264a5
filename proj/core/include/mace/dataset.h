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

#ifndef MACE_DATASET_H_
#define MACE_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

#include "mace/schema.h"

namespace mace {

// Rows plus ground-truth labels. Labels are only consumed when training the
// demo classifiers; every explanation stage reads predictions instead.
struct Dataset {
  Schema schema;
  std::vector<Instance> rows;
  std::vector<int> labels;

  std::size_t size() const { return rows.size(); }
};

// Throws SchemaError/RowError when rows are empty, widths disagree or values
// fall outside the declared categories.
void ValidateDataset(const Dataset& data);

// Comma-separated text with a header row naming every schema column plus the
// label column (any order). Categories are matched against the schema, never
// inferred. Errors carry the 1-based line number of the offending row.
Dataset ReadCsv(std::istream& in, const Schema& schema);
Dataset LoadDataset(const std::filesystem::path& path, const Schema& schema);

void WriteCsv(std::ostream& out, const Dataset& data);
void SaveDataset(const std::filesystem::path& path, const Dataset& data);

// Deterministic shuffled split; the first part holds round(fraction * n)
// rows (at least one row on each side when n >= 2).
std::pair<Dataset, Dataset> SplitDataset(const Dataset& data,
                                         double train_fraction,
                                         std::uint64_t seed);

}  // namespace mace

#endif  // MACE_DATASET_H_
