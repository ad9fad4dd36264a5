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

#include "mace/knn_index.h"

#include <algorithm>
#include <cmath>

#include "mace/errors.h"

namespace mace {

ClassIndex ClassIndex::Build(const Dataset& data, const ClassifierHandle& model,
                             const EncoderState& enc,
                             std::vector<std::size_t> columns) {
  ValidateDataset(data);
  std::sort(columns.begin(), columns.end());
  const std::size_t width = enc.KnnWidth(columns);
  std::vector<double> encoded(data.size() * width);
  for (std::size_t r = 0; r < data.size(); ++r) {
    enc.EncodeForKnnInto(data.rows[r], columns,
                         std::span<double>(encoded.data() + r * width, width));
  }
  std::vector<int> predicted;
  predicted.reserve(data.size());
  for (const auto& probs : model.PredictProbaMany(data.rows)) {
    predicted.push_back(ArgMax(probs));
  }
  return FromParts(data.rows, std::move(predicted), std::move(encoded), width,
                   std::move(columns), model.class_count());
}

ClassIndex ClassIndex::FromParts(std::vector<Instance> instances,
                                 std::vector<int> predicted,
                                 std::vector<double> encoded,
                                 std::size_t width,
                                 std::vector<std::size_t> columns,
                                 int class_count) {
  if (predicted.size() != instances.size() ||
      encoded.size() != instances.size() * width || class_count < 2) {
    throw ArtifactError("inconsistent index parts");
  }
  ClassIndex idx;
  idx.columns_ = std::move(columns);
  idx.width_ = width;
  idx.instances_ = std::move(instances);
  idx.predicted_ = std::move(predicted);
  idx.encoded_ = std::move(encoded);
  idx.members_.assign(static_cast<std::size_t>(class_count), {});
  for (std::size_t r = 0; r < idx.predicted_.size(); ++r) {
    const int label = idx.predicted_[r];
    if (label < 0 || label >= class_count) {
      throw ArtifactError("index row predicted out-of-range class");
    }
    idx.members_[static_cast<std::size_t>(label)].push_back(r);
  }
  return idx;
}

std::size_t ClassIndex::ClassSize(int label) const {
  if (label < 0 || label >= class_count()) return 0;
  return members_[static_cast<std::size_t>(label)].size();
}

std::vector<ClassIndex::Neighbor> ClassIndex::Nearest(
    int label, std::span<const double> query, std::size_t k) const {
  if (query.size() != width_) throw Error("query width does not match index");
  const auto& rows = Members(label);
  std::vector<Neighbor> all;
  all.reserve(rows.size());
  for (std::size_t r : rows) {
    const double* p = encoded_.data() + r * width_;
    double d2 = 0.0;
    for (std::size_t j = 0; j < width_; ++j) {
      const double diff = p[j] - query[j];
      d2 += diff * diff;
    }
    all.push_back({r, d2});
  }
  const std::size_t take = std::min(k, all.size());
  auto less = [](const Neighbor& a, const Neighbor& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.row < b.row;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take),
                    all.end(), less);
  all.resize(take);
  for (auto& n : all) n.distance = std::sqrt(n.distance);
  return all;
}

std::vector<ClassIndex::Neighbor> ClassIndex::Nearest(int label,
                                                      const Instance& x,
                                                      const EncoderState& enc,
                                                      std::size_t k) const {
  return Nearest(label, enc.EncodeForKnn(x, columns_), k);
}

}  // namespace mace
