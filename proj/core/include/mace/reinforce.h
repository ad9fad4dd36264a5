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

// Policy-gradient search over candidate features.
//
// Training minimizes
//
//   -E_pi[f_target(x')] + lambda1 * sum_c p_c + lambda2 * sum_c h(p_c)
//
// with the score-function estimator over one-step episodes: each sampled
// action builds x' from x and earns f_target(x') minus the batch median.
// h(p) = p log p by default (see EntropyTerm). Logits are updated with Adam.

#ifndef MACE_REINFORCE_H_
#define MACE_REINFORCE_H_

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "mace/candidates.h"
#include "mace/cf_example.h"
#include "mace/classifier.h"
#include "mace/policy.h"

namespace mace {

enum class EntropyTerm {
  kPlogP,      // lambda2 * sum p log p
  kBernoulli,  // lambda2 * sum [p log p + (1-p) log(1-p)]
  kNegated,    // -lambda2 * sum p log p
};

struct RlHyperparams {
  double learning_rate = 0.1;
  int batch_size = 40;
  int epochs = 15;
  double lambda1 = 2.0;
  double lambda2 = 2.0;
  int max_features = 8;  // w
  int samples = 80;      // B
  EntropyTerm entropy = EntropyTerm::kPlogP;
  // Truncate each sampled mask to its top-k columns by p. Off by default.
  std::optional<int> sample_cap;
};

// lambda1 * ||p||_1 + lambda2 * sum h(p_c).
double RegularizerValue(const PolicyParams& theta, const RlHyperparams& hyper);
// Gradient of RegularizerValue w.r.t. the logits.
PolicyParams RegularizerGradient(const PolicyParams& theta,
                                 const RlHyperparams& hyper);

struct TrainingTrace {
  std::vector<double> p_l1;         // ||p||_1 after each epoch
  std::vector<double> mean_reward;  // mean f_target of each epoch's batch
};

// Throws ConfigError when `candidates` is empty.
PolicyParams ReinforceTrain(const Instance& x, const TargetSpec& target,
                            const ClassifierHandle& model,
                            const CandidateFeatures& candidates,
                            const RlHyperparams& hyper, std::mt19937_64& rng,
                            TrainingTrace* trace = nullptr);

struct FeatureChoice {
  std::size_t candidate = 0;  // position in CandidateFeatures
  std::size_t column = 0;
  int value_index = 0;
  double value = 0.0;
  double p = 0.0;
  double q = 0.0;
};

struct GreedyResult {
  CfExample example;
  // Top-w columns by p with their most likely value, descending p.
  std::vector<FeatureChoice> features;
  int applied = 0;  // how many of `features` went into the example
};

// Applies the top-w (column, argmax value) pairs in descending p until the
// target class wins. The result may be invalid if the list runs out.
GreedyResult GreedyConstruct(const PolicyParams& theta, const Instance& x,
                             const TargetSpec& target,
                             const ClassifierHandle& model,
                             const CandidateFeatures& candidates,
                             const EncoderState& enc, int max_features);

// {greedy example} + every valid example among `samples` policy draws,
// deduplicated by instance. The greedy example is always first.
std::vector<CfExample> SampleValidBatch(const PolicyParams& theta,
                                        const Instance& x,
                                        const TargetSpec& target,
                                        const ClassifierHandle& model,
                                        const CandidateFeatures& candidates,
                                        const EncoderState& enc,
                                        const CfExample& greedy, int samples,
                                        std::optional<int> sample_cap,
                                        std::mt19937_64& rng);

}  // namespace mace

#endif  // MACE_REINFORCE_H_
