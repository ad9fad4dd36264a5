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

#include "mace/policy.h"

#include <algorithm>
#include <cmath>

#include "mace/demo_models.h"
#include "mace/errors.h"

namespace mace {

namespace {

// log(sigmoid(z)) without overflow.
double LogSigmoid(double z) {
  return z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

double LogSumExp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

PolicyParams PolicyParams::Uniform(const CandidateFeatures& candidates) {
  PolicyParams theta;
  theta.p_logits.assign(candidates.size(), 0.0);
  for (const auto& col : candidates.columns) {
    theta.q_logits.emplace_back(col.values.size(), 0.0);
  }
  return theta;
}

PolicyParams PolicyParams::ZerosLike(const PolicyParams& other) {
  PolicyParams z;
  z.p_logits.assign(other.p_logits.size(), 0.0);
  for (const auto& q : other.q_logits) z.q_logits.emplace_back(q.size(), 0.0);
  return z;
}

double PolicyParams::p(std::size_t c) const { return Sigmoid(p_logits[c]); }

std::vector<double> PolicyParams::q(std::size_t c) const {
  return Softmax(q_logits[c]);
}

std::vector<double> PolicyParams::p_all() const {
  std::vector<double> out;
  for (std::size_t c = 0; c < size(); ++c) out.push_back(p(c));
  return out;
}

double PolicyParams::p_l1() const {
  double s = 0.0;
  for (std::size_t c = 0; c < size(); ++c) s += p(c);
  return s;
}

std::vector<double> PolicyParams::Flatten() const {
  std::vector<double> flat = p_logits;
  for (const auto& q : q_logits) flat.insert(flat.end(), q.begin(), q.end());
  return flat;
}

void PolicyParams::Unflatten(std::span<const double> flat) {
  std::size_t pos = 0;
  for (auto& v : p_logits) v = flat[pos++];
  for (auto& q : q_logits) {
    for (auto& v : q) v = flat[pos++];
  }
  if (pos != flat.size()) throw Error("flat parameter length mismatch");
}

void PolicyParams::CheckShape(const CandidateFeatures& candidates) const {
  bool ok = p_logits.size() == candidates.size() &&
            q_logits.size() == candidates.size();
  for (std::size_t c = 0; ok && c < candidates.size(); ++c) {
    ok = q_logits[c].size() == candidates[c].values.size();
  }
  if (!ok) throw ConfigError("policy shape does not match candidates");
}

Action Action::Empty(std::size_t s) {
  return Action{std::vector<std::uint8_t>(s, 0), std::vector<int>(s, kNone)};
}

std::size_t Action::selected() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double lse = LogSumExp(logits);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - lse);
  }
  return out;
}

double PolicyLogProb(const PolicyParams& theta, const Action& action) {
  double lp = 0.0;
  for (std::size_t c = 0; c < theta.size(); ++c) {
    const double z = theta.p_logits[c];
    if (action.mask[c]) {
      lp += LogSigmoid(z);
      const auto& q = theta.q_logits[c];
      lp += q[static_cast<std::size_t>(action.choice[c])] - LogSumExp(q);
    } else {
      lp += LogSigmoid(-z);
    }
  }
  return lp;
}

PolicyParams PolicyLogProbGradient(const PolicyParams& theta,
                                   const Action& action) {
  auto g = PolicyParams::ZerosLike(theta);
  for (std::size_t c = 0; c < theta.size(); ++c) {
    const double p = theta.p(c);
    g.p_logits[c] = (action.mask[c] ? 1.0 : 0.0) - p;
    if (action.mask[c]) {
      const auto q = theta.q(c);
      for (std::size_t j = 0; j < q.size(); ++j) {
        const double hit = static_cast<int>(j) == action.choice[c] ? 1.0 : 0.0;
        g.q_logits[c][j] = hit - q[j];
      }
    }
  }
  return g;
}

Action SampleAction(const PolicyParams& theta, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Action a = Action::Empty(theta.size());
  for (std::size_t c = 0; c < theta.size(); ++c) {
    const double u = unit(rng);
    if (u >= theta.p(c)) continue;
    a.mask[c] = 1;
    const auto q = theta.q(c);
    double v = unit(rng);
    std::size_t j = 0;
    for (; j + 1 < q.size(); ++j) {
      if (v < q[j]) break;
      v -= q[j];
    }
    a.choice[c] = static_cast<int>(j);
  }
  return a;
}

Instance ApplyAction(const Instance& x, const Action& action,
                     const CandidateFeatures& candidates) {
  Instance out = x;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (!action.mask[c]) continue;
    const auto& col = candidates[c];
    out[col.column] =
        col.values.at(static_cast<std::size_t>(action.choice[c])).value;
  }
  return out;
}

}  // namespace mace
