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

// Training-data statistics used by the search stages:
//
//  * equal-frequency bins for each continuous column, giving the ordinal
//    coordinate used by nearest-neighbour search and the concrete
//    "representative" value substituted when a bin is chosen;
//  * min/max for the [0, 1] normalization used by fine-tuning;
//  * per-column medians, the divisors of the continuous proximity term.

#ifndef MACE_ENCODERS_H_
#define MACE_ENCODERS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mace/dataset.h"
#include "mace/schema.h"

namespace mace {

inline constexpr int kDefaultBins = 10;

struct ContinuousEncoding {
  // bin_count() + 1 ascending values: min, interior cut points, max. A bin i
  // covers [edges[i], edges[i+1]), the last bin is closed on the right.
  std::vector<double> edges;
  // Median of the training values falling in each bin.
  std::vector<double> representatives;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  // All training values equal: one bin, never a candidate column.
  bool constant = false;

  std::size_t bin_count() const { return representatives.size(); }
  int BinOf(double value) const;
};

class EncoderState {
 public:
  EncoderState() = default;
  EncoderState(Schema schema, std::vector<ContinuousEncoding> continuous,
               std::vector<std::string> warnings);

  const Schema& schema() const { return schema_; }
  // Indexed by column; entries for categorical columns are empty.
  const std::vector<ContinuousEncoding>& continuous() const {
    return continuous_;
  }
  const ContinuousEncoding& column(std::size_t col) const {
    return continuous_.at(col);
  }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Category index for categorical columns, bin index for continuous ones.
  int DiscreteKey(std::size_t col, double value) const;
  // The value an Instance holds when column `col` takes discrete `key`.
  double ValueForKey(std::size_t col, int key) const;

  // One-hot blocks for categorical columns, bin index for continuous ones,
  // restricted to `columns` (ascending) or all columns when empty.
  std::size_t KnnWidth(std::span<const std::size_t> columns = {}) const;
  std::vector<double> EncodeForKnn(const Instance& x,
                                   std::span<const std::size_t> columns = {}) const;
  void EncodeForKnnInto(const Instance& x, std::span<const std::size_t> columns,
                        std::span<double> out) const;

  double NormalizeValue(std::size_t col, double value) const;
  double DenormalizeValue(std::size_t col, double z) const;
  // Continuous columns mapped affinely onto [0, 1] (clipped), categorical
  // values untouched.
  Instance Normalize(const Instance& x) const;
  Instance Denormalize(const Instance& z) const;

  // Median used as the proximity divisor, floored at kMedianFloor in
  // absolute value. `floored` reports whether the floor applied.
  double ProximityScale(std::size_t col, bool* floored = nullptr) const;

  static constexpr double kMedianFloor = 1e-9;

 private:
  Schema schema_;
  std::vector<ContinuousEncoding> continuous_;
  std::vector<std::string> warnings_;
};

// Fits bins, medians and ranges on `data`. k_bins >= 2. Duplicate quantile
// cut points are merged, so a column may end with fewer than k_bins bins.
EncoderState FitEncoders(const Dataset& data, int k_bins = kDefaultBins);

// Median of an unsorted sample (mean of the middle pair for even sizes).
double Median(std::vector<double> values);

// Type-7 (linear interpolation) quantile of sorted values.
double SortedQuantile(std::span<const double> sorted, double q);

}  // namespace mace

#endif  // MACE_ENCODERS_H_
