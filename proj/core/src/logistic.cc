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

#include <algorithm>
#include <cmath>

#include "mace/demo_models.h"
#include "mace/errors.h"

namespace mace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

void CheckBinaryLabels(const Dataset& data) {
  ValidateDataset(data);
  for (int y : data.labels) {
    if (y != 0 && y != 1) {
      throw Unsupported("demo classifiers need binary labels, found class " +
                        std::to_string(y));
    }
  }
}

std::size_t FeatureWidth(const Schema& schema) {
  return schema.CategoricalWidth() + schema.ContinuousColumns().size();
}

}  // namespace

LogisticModel::LogisticModel(Schema schema, std::vector<double> mins,
                             std::vector<double> maxs,
                             std::vector<double> weights, double bias)
    : schema_(std::move(schema)),
      mins_(std::move(mins)),
      maxs_(std::move(maxs)),
      weights_(std::move(weights)),
      bias_(bias) {
  if (mins_.size() != schema_.size() || maxs_.size() != schema_.size() ||
      weights_.size() != FeatureWidth(schema_)) {
    throw ConfigError("logistic model parameters do not match schema");
  }
}

LogisticModel LogisticModel::Zero(const Dataset& data) {
  const auto& schema = data.schema;
  std::vector<double> mins(schema.size(), 0.0), maxs(schema.size(), 0.0);
  for (auto c : schema.ContinuousColumns()) {
    mins[c] = maxs[c] = data.rows.front()[c];
    for (const auto& row : data.rows) {
      mins[c] = std::min(mins[c], row[c]);
      maxs[c] = std::max(maxs[c], row[c]);
    }
  }
  return LogisticModel(schema, std::move(mins), std::move(maxs),
                       std::vector<double>(FeatureWidth(schema), 0.0), 0.0);
}

std::vector<double> LogisticModel::Features(const Instance& x) const {
  std::vector<double> phi(weights_.size(), 0.0);
  std::size_t pos = 0;
  for (std::size_t c = 0; c < schema_.size(); ++c) {
    if (schema_.is_categorical(c)) {
      phi[pos + static_cast<std::size_t>(x[c])] = 1.0;
      pos += schema_.column(c).categories.size();
    } else {
      const double range = maxs_[c] - mins_[c];
      phi[pos++] = range > 0 ? (x[c] - mins_[c]) / range : 0.0;
    }
  }
  return phi;
}

double LogisticModel::Logit(const Instance& x) const {
  const auto phi = Features(x);
  double z = bias_;
  for (std::size_t i = 0; i < phi.size(); ++i) z += weights_[i] * phi[i];
  return z;
}

std::vector<double> LogisticModel::PredictProba(const Instance& x) const {
  const double p = Sigmoid(Logit(x));
  return {1.0 - p, p};
}

void LogisticModel::Fit(const Dataset& data, const LogisticOptions& options) {
  CheckBinaryLabels(data);
  const std::size_t n = data.rows.size();
  std::vector<std::vector<double>> phis;
  phis.reserve(n);
  for (const auto& row : data.rows) phis.push_back(Features(row));

  std::vector<double> grad(weights_.size());
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double z = bias_;
      for (std::size_t k = 0; k < grad.size(); ++k) z += weights_[k] * phis[i][k];
      const double err = Sigmoid(z) - data.labels[i];
      for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += err * phis[i][k];
      grad_b += err;
    }
    const double scale = options.learning_rate / static_cast<double>(n);
    for (std::size_t k = 0; k < grad.size(); ++k) weights_[k] -= scale * grad[k];
    bias_ -= scale * grad_b;
  }
}

std::shared_ptr<LogisticModel> TrainLogistic(const Dataset& data,
                                             const LogisticOptions& options) {
  CheckBinaryLabels(data);
  auto model = std::make_shared<LogisticModel>(LogisticModel::Zero(data));
  model->Fit(data, options);
  return model;
}

}  // namespace mace
