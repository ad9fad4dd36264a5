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

#ifndef MACE_KNN_INDEX_H_
#define MACE_KNN_INDEX_H_

#include <cstddef>
#include <span>
#include <vector>

#include "mace/classifier.h"
#include "mace/dataset.h"
#include "mace/encoders.h"

namespace mace {

// Exact Euclidean nearest-neighbour search over training rows, partitioned
// by the class the model predicts for each row (not the ground truth), so
// every member of partition `l` is itself predicted as `l`.
class ClassIndex {
 public:
  struct Neighbor {
    std::size_t row;  // position in instances()
    double distance;
  };

  ClassIndex() = default;

  // Scores every row of `data` once. `columns` restricts the encoding to a
  // subset (ascending); empty means all columns.
  static ClassIndex Build(const Dataset& data, const ClassifierHandle& model,
                          const EncoderState& enc,
                          std::vector<std::size_t> columns = {});

  // Reassembles a persisted index. `encoded` is row-major, width per row.
  static ClassIndex FromParts(std::vector<Instance> instances,
                              std::vector<int> predicted,
                              std::vector<double> encoded, std::size_t width,
                              std::vector<std::size_t> columns,
                              int class_count);

  int class_count() const { return static_cast<int>(members_.size()); }
  std::size_t size() const { return instances_.size(); }
  std::size_t width() const { return width_; }
  const std::vector<std::size_t>& columns() const { return columns_; }
  std::size_t ClassSize(int label) const;
  const std::vector<std::size_t>& Members(int label) const {
    return members_.at(static_cast<std::size_t>(label));
  }

  const Instance& instance(std::size_t row) const { return instances_[row]; }
  const std::vector<Instance>& instances() const { return instances_; }
  int predicted(std::size_t row) const { return predicted_[row]; }
  const std::vector<int>& predictions() const { return predicted_; }
  std::span<const double> encoded(std::size_t row) const {
    return {encoded_.data() + row * width_, width_};
  }
  const std::vector<double>& encoded_matrix() const { return encoded_; }

  // The k nearest members of partition `label`, ascending by distance, ties
  // by row position. Returns fewer when the partition is smaller.
  std::vector<Neighbor> Nearest(int label, std::span<const double> query,
                                std::size_t k) const;
  std::vector<Neighbor> Nearest(int label, const Instance& x,
                                const EncoderState& enc, std::size_t k) const;

 private:
  std::vector<std::size_t> columns_;
  std::size_t width_ = 0;
  std::vector<Instance> instances_;
  std::vector<int> predicted_;
  std::vector<double> encoded_;
  std::vector<std::vector<std::size_t>> members_;
};

}  // namespace mace

#endif  // MACE_KNN_INDEX_H_
