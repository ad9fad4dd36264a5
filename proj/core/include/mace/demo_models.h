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

// Two small binary classifiers for demos and tests: a differentiable
// logistic model and a piecewise-constant boosted-stumps model.

#ifndef MACE_DEMO_MODELS_H_
#define MACE_DEMO_MODELS_H_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "mace/classifier.h"
#include "mace/dataset.h"

namespace mace {

struct LogisticOptions {
  int epochs = 400;
  double learning_rate = 0.5;
};

// p(class 1) = sigmoid(w . phi(x) + b), where phi one-hot encodes categorical
// columns and min-max scales continuous ones using training ranges.
class LogisticModel : public Classifier {
 public:
  LogisticModel(Schema schema, std::vector<double> mins,
                std::vector<double> maxs, std::vector<double> weights,
                double bias);
  // All-zero weights; predicts [0.5, 0.5] everywhere.
  static LogisticModel Zero(const Dataset& data);

  int ClassCount() const override { return 2; }
  std::vector<double> PredictProba(const Instance& x) const override;
  std::string Kind() const override { return "logistic"; }

  std::vector<double> Features(const Instance& x) const;
  double Logit(const Instance& x) const;

  const Schema& schema() const { return schema_; }
  const std::vector<double>& mins() const { return mins_; }
  const std::vector<double>& maxs() const { return maxs_; }
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

  // Full-batch gradient descent on the mean log loss, in place.
  void Fit(const Dataset& data, const LogisticOptions& options);

 private:
  Schema schema_;
  std::vector<double> mins_, maxs_;
  std::vector<double> weights_;
  double bias_ = 0.0;
};

// Throws Unsupported for labels outside {0, 1}.
std::shared_ptr<LogisticModel> TrainLogistic(const Dataset& data,
                                             const LogisticOptions& options = {});

struct StumpOptions {
  int rounds = 100;
  double learning_rate = 0.3;
  double l2 = 1.0;
};

// Depth-1 split. Continuous: goes left when x <= threshold. Categorical:
// goes left when x == category.
struct Stump {
  std::size_t column = 0;
  bool categorical = false;
  double threshold = 0.0;
  int category = 0;
  double left = 0.0;
  double right = 0.0;

  double Eval(const Instance& x) const;
};

// Additive logit of stumps fit by Newton boosting on the logistic loss.
class BoostedStumps : public Classifier {
 public:
  BoostedStumps(Schema schema, double base_score, std::vector<Stump> stumps);

  int ClassCount() const override { return 2; }
  std::vector<double> PredictProba(const Instance& x) const override;
  std::string Kind() const override { return "stumps"; }

  double Logit(const Instance& x) const;
  const Schema& schema() const { return schema_; }
  double base_score() const { return base_score_; }
  const std::vector<Stump>& stumps() const { return stumps_; }

 private:
  Schema schema_;
  double base_score_ = 0.0;
  std::vector<Stump> stumps_;
};

std::shared_ptr<BoostedStumps> TrainBoostedStumps(
    const Dataset& data, const StumpOptions& options = {});

// JSON persistence of the demo models, tagged with kModelFormat.
inline constexpr const char* kModelFormat = "mace-model/1";
void SaveModel(const std::filesystem::path& path, const Classifier& model);
// Throws ArtifactError for unknown kinds, tag mismatch or corrupt files.
std::shared_ptr<Classifier> LoadModel(const std::filesystem::path& path,
                                      const Schema& schema);

double Sigmoid(double z);

}  // namespace mace

#endif  // MACE_DEMO_MODELS_H_
