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

// The black-box classifier contract. Every explanation stage scores
// instances exclusively through ClassifierHandle, so in-process models and
// remote scorers are interchangeable.

#ifndef MACE_CLASSIFIER_H_
#define MACE_CLASSIFIER_H_

#include <atomic>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mace/schema.h"

namespace mace {

class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual int ClassCount() const = 0;
  // Probability per class. Implementations must be deterministic.
  virtual std::vector<double> PredictProba(const Instance& x) const = 0;
  // Default: one PredictProba call per instance.
  virtual std::vector<std::vector<double>> PredictProbaMany(
      std::span<const Instance> xs) const;
  // Short tag used in reports ("logistic", "stumps", "remote", ...).
  virtual std::string Kind() const = 0;
};

// Returns an error message when `probs` is not a probability vector of
// length `class_count` (entries >= 0, sum 1 within kProbabilityTolerance),
// or an empty string when it is.
std::string CheckProbabilities(std::span<const double> probs, int class_count);
inline constexpr double kProbabilityTolerance = 1e-6;

// Validity rule shared by every stage: the target class must win. For two
// classes this is probs[target] > 0.5; for more, a strict argmax.
bool IsTargetPredicted(std::span<const double> probs, int target);
int ArgMax(std::span<const double> probs);

struct TargetSpec {
  int source = 0;
  int target = 1;
};

// Throws ConfigError unless source != target and both are in range.
void CheckTarget(const TargetSpec& t, int class_count);
// For binary problems the target is always the other class.
TargetSpec OppositeOf(int source);

// Shared, immutable view of a classifier. Every output is validated (never
// repaired) before it reaches the caller; violations raise ProtocolError.
class ClassifierHandle {
 public:
  ClassifierHandle() = default;
  explicit ClassifierHandle(std::shared_ptr<const Classifier> impl);

  bool valid() const { return impl_ != nullptr; }
  int class_count() const { return class_count_; }
  std::string kind() const { return impl_->Kind(); }
  const Classifier& impl() const { return *impl_; }

  std::vector<double> PredictProba(const Instance& x) const;
  std::vector<std::vector<double>> PredictProbaMany(
      std::span<const Instance> xs) const;

  int PredictClass(const Instance& x) const { return ArgMax(PredictProba(x)); }
  double TargetProbability(const Instance& x, int target) const {
    return PredictProba(x).at(static_cast<std::size_t>(target));
  }
  bool Predicts(const Instance& x, int target) const {
    return IsTargetPredicted(PredictProba(x), target);
  }

  // Number of PredictProba evaluations through this handle and its copies.
  long long calls() const { return calls_->load(); }

 private:
  std::shared_ptr<const Classifier> impl_;
  int class_count_ = 0;
  std::shared_ptr<std::atomic<long long>> calls_ =
      std::make_shared<std::atomic<long long>>(0);
};

// Returns the same probabilities for every input.
class ConstantClassifier : public Classifier {
 public:
  explicit ConstantClassifier(std::vector<double> probs);
  int ClassCount() const override { return static_cast<int>(probs_.size()); }
  std::vector<double> PredictProba(const Instance&) const override {
    return probs_;
  }
  std::string Kind() const override { return "constant"; }

 private:
  std::vector<double> probs_;
};

}  // namespace mace

#endif  // MACE_CLASSIFIER_H_
