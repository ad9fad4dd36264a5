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

// Candidate feature selection: the columns and values worth changing, mined
// from the query's nearest neighbours in the target class.

#ifndef MACE_CANDIDATES_H_
#define MACE_CANDIDATES_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mace/classifier.h"
#include "mace/encoders.h"
#include "mace/knn_index.h"

namespace mace {

struct CandidateValue {
  int key = 0;         // category index, or bin index for continuous columns
  double value = 0.0;  // what the instance holds when this value is applied
  int count = 0;       // neighbours carrying this value
};

struct CandidateColumn {
  std::size_t column = 0;
  int count = 0;  // neighbours differing from the query at this column
  std::vector<CandidateValue> values;
};

struct CandidateFeatures {
  // Sorted by descending count, ties by ascending column; values likewise by
  // descending count, ties by ascending key. Never holds a zero-count column.
  std::vector<CandidateColumn> columns;
  // Index rows of the neighbours the counts came from, nearest first.
  std::vector<std::size_t> neighbor_rows;
  std::vector<std::string> warnings;
  // Set when the search space was narrowed after neighbours were fetched;
  // an index built on the allowed columns would give better neighbours.
  bool rebuild_hint = false;

  bool empty() const { return columns.empty(); }
  std::size_t size() const { return columns.size(); }
  const CandidateColumn& operator[](std::size_t i) const { return columns[i]; }
};

struct CandidateOptions {
  int neighbors = 30;   // K
  int max_columns = 10; // s
  int max_values = 3;   // m
  bool actionable_only = true;
};

// Counts differences between `x` and `neighbors` at the columns in
// `allowed` (all when empty). Continuous columns compare and count bins.
CandidateFeatures CandidatesFromNeighbors(const Instance& x,
                                          std::span<const Instance> neighbors,
                                          const EncoderState& enc,
                                          int max_columns, int max_values,
                                          std::span<const std::size_t> allowed = {});

// Fetches the K nearest neighbours of `x` in the target partition and counts
// them. Throws TargetUnreachable when the partition is empty; K larger than
// the partition is capped with a warning. An empty result means there is
// nothing to change on the allowed columns. A non-empty `allowed` replaces
// the schema's actionable flags.
CandidateFeatures SelectCandidates(const Instance& x, const TargetSpec& target,
                                   const ClassIndex& index,
                                   const EncoderState& enc,
                                   const CandidateOptions& options,
                                   std::span<const std::size_t> allowed = {});

// Keeps only columns in `allowed`; sets rebuild_hint when anything dropped.
CandidateFeatures RestrictActionable(const CandidateFeatures& candidates,
                                     std::span<const std::size_t> allowed);

}  // namespace mace

#endif  // MACE_CANDIDATES_H_
