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

#include "mace/reinforce.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "mace/encoders.h"
#include "mace/errors.h"

namespace mace {

namespace {

double EntropyValue(double p, EntropyTerm term) {
  switch (term) {
    case EntropyTerm::kPlogP: return p * std::log(p);
    case EntropyTerm::kBernoulli: return p * std::log(p) + (1 - p) * std::log(1 - p);
    case EntropyTerm::kNegated: return -p * std::log(p);
  }
  return 0.0;
}

// d h / d p
double EntropySlope(double p, EntropyTerm term) {
  switch (term) {
    case EntropyTerm::kPlogP: return std::log(p) + 1.0;
    case EntropyTerm::kBernoulli: return std::log(p) - std::log(1 - p);
    case EntropyTerm::kNegated: return -(std::log(p) + 1.0);
  }
  return 0.0;
}

class Adam {
 public:
  explicit Adam(std::size_t n, double lr) : lr_(lr), m_(n, 0.0), v_(n, 0.0) {}

  void Step(std::vector<double>& params, const std::vector<double>& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, t_);
    const double c2 = 1.0 - std::pow(kBeta2, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = kBeta1 * m_[i] + (1 - kBeta1) * grad[i];
      v_[i] = kBeta2 * v_[i] + (1 - kBeta2) * grad[i] * grad[i];
      params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + kEps);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  double lr_;
  int t_ = 0;
  std::vector<double> m_, v_;
};

// Candidate positions ordered by descending p, ties by position.
std::vector<std::size_t> ByProbability(const PolicyParams& theta) {
  std::vector<std::size_t> order(theta.size());
  std::iota(order.begin(), order.end(), 0);
  const auto p = theta.p_all();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  return order;
}

}  // namespace

double RegularizerValue(const PolicyParams& theta, const RlHyperparams& hyper) {
  double l1 = 0.0, ent = 0.0;
  for (std::size_t c = 0; c < theta.size(); ++c) {
    const double p = theta.p(c);
    l1 += p;
    ent += EntropyValue(p, hyper.entropy);
  }
  return hyper.lambda1 * l1 + hyper.lambda2 * ent;
}

PolicyParams RegularizerGradient(const PolicyParams& theta,
                                 const RlHyperparams& hyper) {
  auto g = PolicyParams::ZerosLike(theta);
  for (std::size_t c = 0; c < theta.size(); ++c) {
    const double p = theta.p(c);
    const double dp = hyper.lambda1 + hyper.lambda2 * EntropySlope(p, hyper.entropy);
    g.p_logits[c] = dp * p * (1.0 - p);
  }
  return g;
}

PolicyParams ReinforceTrain(const Instance& x, const TargetSpec& target,
                            const ClassifierHandle& model,
                            const CandidateFeatures& candidates,
                            const RlHyperparams& hyper, std::mt19937_64& rng,
                            TrainingTrace* trace) {
  if (candidates.empty()) throw ConfigError("no candidate features to train on");
  if (hyper.batch_size < 1 || hyper.epochs < 0 || hyper.learning_rate <= 0) {
    throw ConfigError("invalid RL hyperparameters");
  }
  auto theta = PolicyParams::Uniform(candidates);
  auto flat = theta.Flatten();
  Adam adam(flat.size(), hyper.learning_rate);
  const auto batch = static_cast<std::size_t>(hyper.batch_size);

  std::vector<Action> actions(batch);
  std::vector<Instance> built(batch);
  std::vector<double> rewards(batch);
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    for (std::size_t i = 0; i < batch; ++i) {
      actions[i] = SampleAction(theta, rng);
      built[i] = ApplyAction(x, actions[i], candidates);
    }
    const auto probs = model.PredictProbaMany(built);
    for (std::size_t i = 0; i < batch; ++i) {
      rewards[i] = probs[i][static_cast<std::size_t>(target.target)];
    }
    const double baseline = Median(rewards);

    // Gradient of the loss: -(1/B) sum (r_i - b) grad log pi(a_i) + reg'.
    auto grad = RegularizerGradient(theta, hyper).Flatten();
    for (std::size_t i = 0; i < batch; ++i) {
      const double adv = rewards[i] - baseline;
      if (adv == 0.0) continue;
      const auto g = PolicyLogProbGradient(theta, actions[i]).Flatten();
      for (std::size_t k = 0; k < grad.size(); ++k) {
        grad[k] -= adv * g[k] / static_cast<double>(batch);
      }
    }
    adam.Step(flat, grad);
    theta.Unflatten(flat);

    if (trace) {
      trace->p_l1.push_back(theta.p_l1());
      trace->mean_reward.push_back(
          std::accumulate(rewards.begin(), rewards.end(), 0.0) / batch);
    }
  }
  return theta;
}

GreedyResult GreedyConstruct(const PolicyParams& theta, const Instance& x,
                             const TargetSpec& target,
                             const ClassifierHandle& model,
                             const CandidateFeatures& candidates,
                             const EncoderState& enc, int max_features) {
  theta.CheckShape(candidates);
  GreedyResult out;
  const auto order = ByProbability(theta);
  const auto w = std::min<std::size_t>(order.size(),
                                       static_cast<std::size_t>(std::max(max_features, 0)));
  for (std::size_t i = 0; i < w; ++i) {
    const std::size_t c = order[i];
    const auto q = theta.q(c);
    const auto best = static_cast<std::size_t>(
        std::max_element(q.begin(), q.end()) - q.begin());
    out.features.push_back({c, candidates[c].column, static_cast<int>(best),
                            candidates[c].values[best].value, theta.p(c),
                            q[best]});
  }

  Instance cf = x;
  auto probs = model.PredictProba(cf);
  for (const auto& f : out.features) {
    if (IsTargetPredicted(probs, target.target)) break;
    cf[f.column] = f.value;
    probs = model.PredictProba(cf);
    ++out.applied;
  }
  out.example = MakeExample(x, std::move(cf), probs, target, enc,
                            Provenance::kRlGreedy);
  return out;
}

std::vector<CfExample> SampleValidBatch(const PolicyParams& theta,
                                        const Instance& x,
                                        const TargetSpec& target,
                                        const ClassifierHandle& model,
                                        const CandidateFeatures& candidates,
                                        const EncoderState& enc,
                                        const CfExample& greedy, int samples,
                                        std::optional<int> sample_cap,
                                        std::mt19937_64& rng) {
  theta.CheckShape(candidates);
  std::vector<CfExample> out{greedy};
  std::set<std::vector<double>> seen{greedy.instance.values};

  const auto order = ByProbability(theta);
  std::vector<Instance> built;
  built.reserve(static_cast<std::size_t>(std::max(samples, 0)));
  for (int i = 0; i < samples; ++i) {
    auto a = SampleAction(theta, rng);
    if (sample_cap && static_cast<int>(a.selected()) > *sample_cap) {
      int kept = 0;
      for (std::size_t c : order) {
        if (!a.mask[c]) continue;
        if (kept < *sample_cap) {
          ++kept;
        } else {
          a.mask[c] = 0;
          a.choice[c] = Action::kNone;
        }
      }
    }
    auto cf = ApplyAction(x, a, candidates);
    if (seen.insert(cf.values).second) built.push_back(std::move(cf));
  }
  const auto probs = model.PredictProbaMany(built);
  for (std::size_t i = 0; i < built.size(); ++i) {
    if (!IsTargetPredicted(probs[i], target.target)) continue;
    out.push_back(MakeExample(x, std::move(built[i]), probs[i], target, enc,
                              Provenance::kRlSample));
  }
  return out;
}

}  // namespace mace
