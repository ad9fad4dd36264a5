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

// Constructed environments shared by the unit and acceptance tests.

#ifndef MACE_TESTS_SUPPORT_ENVS_H_
#define MACE_TESTS_SUPPORT_ENVS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "mace/classifier.h"
#include "mace/dataset.h"
#include "mace/encoders.h"
#include "mace/knn_index.h"
#include "mace/pipeline.h"
#include "mace/remote_scorer.h"

namespace mace::testenv {

// Binary classifier returning [1 - hi, hi] where `rule` holds, else
// [1 - lo, lo].
class RuleClassifier : public Classifier {
 public:
  RuleClassifier(std::function<bool(const Instance&)> rule, double hi = 0.9,
                 double lo = 0.1)
      : rule_(std::move(rule)), hi_(hi), lo_(lo) {}
  int ClassCount() const override { return 2; }
  std::vector<double> PredictProba(const Instance& x) const override {
    const double p = rule_(x) ? hi_ : lo_;
    return {1.0 - p, p};
  }
  std::string Kind() const override { return "rule"; }

 private:
  std::function<bool(const Instance&)> rule_;
  double hi_, lo_;
};

// n categorical columns "c0".."c{n-1}" with k categories each, all
// actionable.
Schema CategoricalSchema(std::size_t n, std::size_t k);

// Uniformly random rows; labels are the model's predictions.
Dataset RandomRows(const Schema& schema, std::size_t rows,
                   std::uint64_t seed);

struct TabularEnv {
  Dataset data;
  EncoderState enc;
  std::shared_ptr<const Classifier> model;
  ClassifierHandle handle;
  ClassIndex index;

  ExplainEnv env() const { return {&enc, &index, handle}; }
};

// Fits encoders on `data` and indexes it under `model`.
std::unique_ptr<TabularEnv> MakeEnv(Dataset data,
                                    std::shared_ptr<const Classifier> model,
                                    int k_bins = kDefaultBins);

// Six categorical columns of four values. The target class (1) is
// predicted iff c2 == 3; no other column has any effect.
struct SingleFlip {
  std::unique_ptr<TabularEnv> env;
  std::size_t column = 2;
  double value = 3.0;
  std::vector<Instance> queries;  // predicted 0
};
SingleFlip MakeSingleFlipEnv(std::uint64_t seed);

// One continuous column "z" with training values spread over [0, 1];
// class 1 iff z >= boundary.
std::unique_ptr<TabularEnv> MakeThresholdEnv(double boundary);

// Synthetic census split 80/20, with a demo model trained on the train part.
struct CensusEnv {
  Dataset test;
  std::unique_ptr<TabularEnv> env;
};
CensusEnv MakeCensusEnv(const std::string& model_kind, std::uint64_t seed);

// Serves `model` over an in-process socket pair from a background thread.
// Destroy every handle to scorer() before this object.
class LoopbackScorer {
 public:
  LoopbackScorer(std::shared_ptr<const Classifier> model, const Schema& schema);
  ~LoopbackScorer();
  LoopbackScorer(const LoopbackScorer&) = delete;
  LoopbackScorer& operator=(const LoopbackScorer&) = delete;

  std::shared_ptr<RemoteScorer> scorer() const { return scorer_; }
  // Drops the client side; the server thread sees end of stream.
  void Close();

 private:
  std::shared_ptr<RemoteScorer> scorer_;
  std::thread server_;
};

}  // namespace mace::testenv

#endif  // MACE_TESTS_SUPPORT_ENVS_H_
