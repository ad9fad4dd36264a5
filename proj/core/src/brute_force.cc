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

#include "mace/brute_force.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>

#include "mace/errors.h"

namespace mace {

std::size_t BruteForceBound(const CandidateFeatures& candidates, int w) {
  const std::size_t s = candidates.size();
  std::size_t m = 0;
  for (const auto& c : candidates.columns) m = std::max(m, c.values.size());
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  std::size_t choose = 1;  // C(s, j)
  std::size_t power = 1;   // m^j
  for (std::size_t j = 0; j <= std::min<std::size_t>(s, std::max(w, 0)); ++j) {
    if (j > 0) {
      choose = choose * (s - j + 1) / j;
      if (m != 0 && power > kMax / m) return kMax;
      power *= m;
    }
    if (power != 0 && choose > kMax / power) return kMax;
    total += choose * power;
  }
  return total;
}

BruteForceResult BruteForceOptimal(const Instance& x, const TargetSpec& target,
                                   const ClassifierHandle& model,
                                   const CandidateFeatures& candidates, int w,
                                   std::size_t limit) {
  if (BruteForceBound(candidates, w) > limit) {
    throw Unsupported("enumeration exceeds " + std::to_string(limit) +
                      " assignments");
  }
  BruteForceResult res;
  res.best = x;
  res.score = model.TargetProbability(x, target.target);
  res.evaluated = 1;

  const std::size_t s = candidates.size();
  const auto max_size = std::min<std::size_t>(s, std::max(w, 0));
  Instance cur = x;
  std::vector<std::size_t> chosen;

  // Assign values to every chosen column, then score.
  std::function<void(std::size_t)> assign = [&](std::size_t depth) {
    if (depth == chosen.size()) {
      const double score = model.TargetProbability(cur, target.target);
      ++res.evaluated;
      if (score > res.score) {
        res.score = score;
        res.best = cur;
      }
      return;
    }
    const auto& col = candidates[chosen[depth]];
    for (const auto& v : col.values) {
      cur[col.column] = v.value;
      assign(depth + 1);
    }
    cur[col.column] = x[col.column];
  };
  // Subsets of a given size in lexicographic order.
  std::function<void(std::size_t, std::size_t)> pick = [&](std::size_t start,
                                                           std::size_t size) {
    if (chosen.size() == size) {
      assign(0);
      return;
    }
    for (std::size_t c = start; c < s; ++c) {
      chosen.push_back(c);
      pick(c + 1, size);
      chosen.pop_back();
    }
  };
  for (std::size_t size = 1; size <= max_size; ++size) pick(0, size);
  return res;
}

BruteForceResult DeterministicPolicyOptimum(const Instance& x,
                                            const TargetSpec& target,
                                            const ClassifierHandle& model,
                                            const CandidateFeatures& candidates,
                                            int w, std::size_t limit) {
  if (BruteForceBound(candidates, w) > limit) {
    throw Unsupported("enumeration exceeds " + std::to_string(limit) +
                      " policies");
  }
  const std::size_t s = candidates.size();
  if (s >= 63) throw Unsupported("too many candidate columns");
  BruteForceResult res;
  res.score = -1.0;
  Action a = Action::Empty(s);
  // Odometer over the value choices of the selected columns.
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s); ++mask) {
    if (std::popcount(mask) > w) continue;
    std::vector<std::size_t> on;
    for (std::size_t c = 0; c < s; ++c) {
      a.mask[c] = (mask >> c) & 1U;
      a.choice[c] = a.mask[c] ? 0 : Action::kNone;
      if (a.mask[c]) on.push_back(c);
    }
    while (true) {
      const Instance cf = ApplyAction(x, a, candidates);
      const double score = model.TargetProbability(cf, target.target);
      ++res.evaluated;
      if (score > res.score) {
        res.score = score;
        res.best = cf;
      }
      std::size_t i = 0;
      for (; i < on.size(); ++i) {
        const std::size_t c = on[i];
        if (++a.choice[c] < static_cast<int>(candidates[c].values.size())) break;
        a.choice[c] = 0;
      }
      if (i == on.size()) break;
    }
  }
  return res;
}

}  // namespace mace
