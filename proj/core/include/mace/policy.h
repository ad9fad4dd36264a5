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

// Stochastic policy over candidate features.
//
// Column c is selected with probability p_c = sigmoid(p_logits[c]),
// independently of the others; a selected column takes value index v with
// probability softmax(q_logits[c])[v]. The probability of an action is
//
//   pi(mu, nu) = prod_c p_c^mu_c (1 - p_c)^(1 - mu_c) * prod_{c: mu_c=1} Q_c(nu_c)

#ifndef MACE_POLICY_H_
#define MACE_POLICY_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mace/candidates.h"
#include "mace/schema.h"

namespace mace {

struct PolicyParams {
  std::vector<double> p_logits;
  std::vector<std::vector<double>> q_logits;

  // All logits zero: p_c = 1/2, uniform value choice. Shapes follow
  // `candidates`.
  static PolicyParams Uniform(const CandidateFeatures& candidates);
  // Same shape, all zeros (gradient accumulator).
  static PolicyParams ZerosLike(const PolicyParams& other);

  std::size_t size() const { return p_logits.size(); }
  double p(std::size_t c) const;
  std::vector<double> q(std::size_t c) const;
  std::vector<double> p_all() const;
  double p_l1() const;

  // Flat view [p_logits..., q_logits[0]..., q_logits[1]..., ...].
  std::vector<double> Flatten() const;
  void Unflatten(std::span<const double> flat);

  // Throws ConfigError when the shape does not follow `candidates`.
  void CheckShape(const CandidateFeatures& candidates) const;
};

struct Action {
  static constexpr int kNone = -1;
  std::vector<std::uint8_t> mask;  // mu
  std::vector<int> choice;         // nu; kNone where mask is 0

  static Action Empty(std::size_t s);
  std::size_t selected() const;
  friend bool operator==(const Action&, const Action&) = default;
};

std::vector<double> Softmax(std::span<const double> logits);

double PolicyLogProb(const PolicyParams& theta, const Action& action);
// d log pi(action) / d logits, same shape as theta.
PolicyParams PolicyLogProbGradient(const PolicyParams& theta,
                                   const Action& action);

Action SampleAction(const PolicyParams& theta, std::mt19937_64& rng);

// x with every selected candidate column set to its chosen value.
Instance ApplyAction(const Instance& x, const Action& action,
                     const CandidateFeatures& candidates);

}  // namespace mace

#endif  // MACE_POLICY_H_
