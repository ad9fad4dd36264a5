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

#include "mace/encoders.h"

#include <algorithm>
#include <cmath>

#include "mace/errors.h"

namespace mace {

int ContinuousEncoding::BinOf(double value) const {
  if (bin_count() <= 1) return 0;
  // Interior edges are edges[1 .. n-1]; a value equal to a cut point belongs
  // to the bin on its right.
  const auto first = edges.begin() + 1;
  const auto last = edges.end() - 1;
  return static_cast<int>(std::upper_bound(first, last, value) - first);
}

EncoderState::EncoderState(Schema schema,
                           std::vector<ContinuousEncoding> continuous,
                           std::vector<std::string> warnings)
    : schema_(std::move(schema)),
      continuous_(std::move(continuous)),
      warnings_(std::move(warnings)) {
  if (continuous_.size() != schema_.size()) {
    throw SchemaError("encoder state width does not match schema");
  }
}

int EncoderState::DiscreteKey(std::size_t col, double value) const {
  if (schema_.is_categorical(col)) return static_cast<int>(value);
  return continuous_[col].BinOf(value);
}

double EncoderState::ValueForKey(std::size_t col, int key) const {
  if (schema_.is_categorical(col)) return static_cast<double>(key);
  return continuous_[col].representatives.at(static_cast<std::size_t>(key));
}

std::size_t EncoderState::KnnWidth(std::span<const std::size_t> columns) const {
  std::size_t w = 0;
  auto add = [&](std::size_t c) {
    w += schema_.is_categorical(c) ? schema_.column(c).categories.size() : 1;
  };
  if (columns.empty()) {
    for (std::size_t c = 0; c < schema_.size(); ++c) add(c);
  } else {
    for (auto c : columns) add(c);
  }
  return w;
}

void EncoderState::EncodeForKnnInto(const Instance& x,
                                    std::span<const std::size_t> columns,
                                    std::span<double> out) const {
  std::size_t pos = 0;
  auto put = [&](std::size_t c) {
    if (schema_.is_categorical(c)) {
      const std::size_t n = schema_.column(c).categories.size();
      for (std::size_t k = 0; k < n; ++k) out[pos + k] = 0.0;
      out[pos + static_cast<std::size_t>(x[c])] = 1.0;
      pos += n;
    } else {
      out[pos++] = static_cast<double>(continuous_[c].BinOf(x[c]));
    }
  };
  if (columns.empty()) {
    for (std::size_t c = 0; c < schema_.size(); ++c) put(c);
  } else {
    for (auto c : columns) put(c);
  }
}

std::vector<double> EncoderState::EncodeForKnn(
    const Instance& x, std::span<const std::size_t> columns) const {
  std::vector<double> out(KnnWidth(columns));
  EncodeForKnnInto(x, columns, out);
  return out;
}

double EncoderState::NormalizeValue(std::size_t col, double value) const {
  const auto& enc = continuous_[col];
  const double range = enc.max - enc.min;
  if (!(range > 0.0)) return 0.0;
  return std::clamp((value - enc.min) / range, 0.0, 1.0);
}

double EncoderState::DenormalizeValue(std::size_t col, double z) const {
  const auto& enc = continuous_[col];
  return enc.min + z * (enc.max - enc.min);
}

Instance EncoderState::Normalize(const Instance& x) const {
  Instance z = x;
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    if (!schema_.is_categorical(c)) z[c] = NormalizeValue(c, x[c]);
  }
  return z;
}

Instance EncoderState::Denormalize(const Instance& z) const {
  Instance x = z;
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    if (!schema_.is_categorical(c)) x[c] = DenormalizeValue(c, z[c]);
  }
  return x;
}

double EncoderState::ProximityScale(std::size_t col, bool* floored) const {
  const double m = std::abs(continuous_.at(col).median);
  const bool low = m < kMedianFloor;
  if (floored) *floored = low;
  return low ? kMedianFloor : m;
}

double Median(std::vector<double> values) {
  if (values.empty()) throw Error("median of empty sample");
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double hi = values[mid];
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lo + hi);
}

double SortedQuantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error("quantile of empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace {

ContinuousEncoding FitColumn(std::vector<double> values, int k_bins) {
  std::sort(values.begin(), values.end());
  ContinuousEncoding enc;
  enc.min = values.front();
  enc.max = values.back();
  enc.median = Median(values);
  if (enc.min == enc.max) {
    enc.constant = true;
    enc.edges = {enc.min, enc.max};
    enc.representatives = {enc.min};
    return enc;
  }

  std::vector<double> cuts;
  for (int j = 1; j < k_bins; ++j) {
    const double q = SortedQuantile(values, static_cast<double>(j) / k_bins);
    if (q > enc.min && (cuts.empty() || q > cuts.back())) cuts.push_back(q);
  }

  // Merge bins that hold no training value into their left neighbour.
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::size_t> counts(cuts.size() + 1, 0);
    for (double v : values) {
      ++counts[std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin()];
    }
    for (std::size_t b = counts.size(); b-- > 1;) {
      if (counts[b] == 0) {
        cuts.erase(cuts.begin() + static_cast<std::ptrdiff_t>(b - 1));
        changed = true;
        break;
      }
    }
  }

  enc.edges.push_back(enc.min);
  enc.edges.insert(enc.edges.end(), cuts.begin(), cuts.end());
  enc.edges.push_back(enc.max);

  std::vector<std::vector<double>> members(cuts.size() + 1);
  for (double v : values) {
    members[std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin()]
        .push_back(v);
  }
  for (auto& m : members) enc.representatives.push_back(Median(std::move(m)));
  return enc;
}

}  // namespace

EncoderState FitEncoders(const Dataset& data, int k_bins) {
  if (k_bins < 2) throw ConfigError("k_bins must be >= 2");
  if (data.rows.empty()) throw SchemaError("cannot fit encoders on no rows");
  const auto& schema = data.schema;
  std::vector<ContinuousEncoding> cont(schema.size());
  std::vector<std::string> warnings;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (schema.is_categorical(c)) continue;
    std::vector<double> values;
    values.reserve(data.rows.size());
    for (const auto& row : data.rows) values.push_back(row[c]);
    cont[c] = FitColumn(std::move(values), k_bins);
    if (cont[c].constant) {
      warnings.push_back("column '" + schema.column(c).name +
                         "' is constant; it can never be a candidate");
    }
  }
  return EncoderState(schema, std::move(cont), std::move(warnings));
}

}  // namespace mace
