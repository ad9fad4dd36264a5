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

#include "mace/classifier.h"

#include <cmath>

#include "mace/errors.h"

namespace mace {

std::vector<std::vector<double>> Classifier::PredictProbaMany(
    std::span<const Instance> xs) const {
  std::vector<std::vector<double>> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(PredictProba(x));
  return out;
}

std::string CheckProbabilities(std::span<const double> probs, int class_count) {
  if (static_cast<int>(probs.size()) != class_count) {
    return "expected " + std::to_string(class_count) + " probabilities, got " +
           std::to_string(probs.size());
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) return "negative or non-finite probability";
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    return "probabilities sum to " + std::to_string(sum);
  }
  return {};
}

int ArgMax(std::span<const double> probs) {
  int best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

bool IsTargetPredicted(std::span<const double> probs, int target) {
  const auto t = static_cast<std::size_t>(target);
  if (probs.size() == 2) return probs[t] > 0.5;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (i != t && probs[i] >= probs[t]) return false;
  }
  return true;
}

void CheckTarget(const TargetSpec& t, int class_count) {
  if (t.source < 0 || t.source >= class_count || t.target < 0 ||
      t.target >= class_count) {
    throw ConfigError("class index out of range");
  }
  if (t.source == t.target) {
    throw ConfigError("target class equals source class");
  }
  if (class_count == 2 && t.target != 1 - t.source) {
    throw ConfigError("binary target must be the opposite class");
  }
}

TargetSpec OppositeOf(int source) { return {source, 1 - source}; }

ClassifierHandle::ClassifierHandle(std::shared_ptr<const Classifier> impl)
    : impl_(std::move(impl)) {
  if (!impl_) throw ConfigError("null classifier");
  class_count_ = impl_->ClassCount();
  if (class_count_ < 2) throw ConfigError("classifier needs >= 2 classes");
}

std::vector<double> ClassifierHandle::PredictProba(const Instance& x) const {
  calls_->fetch_add(1, std::memory_order_relaxed);
  auto probs = impl_->PredictProba(x);
  if (auto err = CheckProbabilities(probs, class_count_); !err.empty()) {
    throw ProtocolError(impl_->Kind() + " classifier: " + err);
  }
  return probs;
}

std::vector<std::vector<double>> ClassifierHandle::PredictProbaMany(
    std::span<const Instance> xs) const {
  calls_->fetch_add(static_cast<long long>(xs.size()),
                    std::memory_order_relaxed);
  auto all = impl_->PredictProbaMany(xs);
  if (all.size() != xs.size()) {
    throw ProtocolError(impl_->Kind() + " classifier: wrong batch size");
  }
  for (const auto& probs : all) {
    if (auto err = CheckProbabilities(probs, class_count_); !err.empty()) {
      throw ProtocolError(impl_->Kind() + " classifier: " + err);
    }
  }
  return all;
}

ConstantClassifier::ConstantClassifier(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (auto err = CheckProbabilities(probs_, static_cast<int>(probs_.size()));
      !err.empty() || probs_.size() < 2) {
    throw ConfigError("constant classifier: invalid probabilities");
  }
}

}  // namespace mace
