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
#include <numeric>

#include "mace/demo_models.h"
#include "mace/errors.h"

namespace mace {

double Stump::Eval(const Instance& x) const {
  const bool go_left =
      categorical ? static_cast<int>(x[column]) == category : x[column] <= threshold;
  return go_left ? left : right;
}

BoostedStumps::BoostedStumps(Schema schema, double base_score,
                             std::vector<Stump> stumps)
    : schema_(std::move(schema)),
      base_score_(base_score),
      stumps_(std::move(stumps)) {
  for (const auto& s : stumps_) {
    if (s.column >= schema_.size() ||
        s.categorical != schema_.is_categorical(s.column)) {
      throw ConfigError("stump does not match schema");
    }
  }
}

double BoostedStumps::Logit(const Instance& x) const {
  double z = base_score_;
  for (const auto& s : stumps_) z += s.Eval(x);
  return z;
}

std::vector<double> BoostedStumps::PredictProba(const Instance& x) const {
  const double p = Sigmoid(Logit(x));
  return {1.0 - p, p};
}

namespace {

struct SplitCandidate {
  double gain = 0.0;
  Stump stump;
  bool found = false;
};

double Score(double g, double h, double l2) { return g * g / (h + l2); }

}  // namespace

std::shared_ptr<BoostedStumps> TrainBoostedStumps(const Dataset& data,
                                                  const StumpOptions& options) {
  ValidateDataset(data);
  const auto& schema = data.schema;
  const std::size_t n = data.rows.size();
  for (int y : data.labels) {
    if (y != 0 && y != 1) {
      throw Unsupported("demo classifiers need binary labels, found class " +
                        std::to_string(y));
    }
  }

  const double positives =
      static_cast<double>(std::count(data.labels.begin(), data.labels.end(), 1));
  const double prior = std::clamp(positives / n, 1e-6, 1.0 - 1e-6);
  const double base = std::log(prior / (1.0 - prior));
  std::vector<Stump> stumps;
  if (positives == 0 || positives == static_cast<double>(n)) {
    return std::make_shared<BoostedStumps>(schema, base, std::move(stumps));
  }

  // Row order sorted by value, per continuous column.
  std::vector<std::vector<std::size_t>> order(schema.size());
  for (auto c : schema.ContinuousColumns()) {
    auto& o = order[c];
    o.resize(n);
    std::iota(o.begin(), o.end(), 0);
    std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) {
      return data.rows[a][c] < data.rows[b][c];
    });
  }

  std::vector<double> margin(n, base), g(n), h(n);
  const double l2 = options.l2;
  for (int round = 0; round < options.rounds; ++round) {
    double g_total = 0.0, h_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = Sigmoid(margin[i]);
      g[i] = data.labels[i] - p;
      h[i] = std::max(p * (1.0 - p), 1e-12);
      g_total += g[i];
      h_total += h[i];
    }
    const double parent = Score(g_total, h_total, l2);

    SplitCandidate best;
    auto consider = [&](double gl, double hl, Stump s) {
      const double gr = g_total - gl, hr = h_total - hl;
      const double gain = Score(gl, hl, l2) + Score(gr, hr, l2) - parent;
      if (gain > best.gain + 1e-12) {
        s.left = options.learning_rate * gl / (hl + l2);
        s.right = options.learning_rate * gr / (hr + l2);
        best = {gain, s, true};
      }
    };

    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (schema.is_categorical(c)) {
        const std::size_t k = schema.column(c).categories.size();
        std::vector<double> gs(k, 0.0), hs(k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          const auto cat = static_cast<std::size_t>(data.rows[i][c]);
          gs[cat] += g[i];
          hs[cat] += h[i];
        }
        for (std::size_t cat = 0; cat < k; ++cat) {
          if (hs[cat] == 0.0 || hs[cat] == h_total) continue;
          Stump s;
          s.column = c;
          s.categorical = true;
          s.category = static_cast<int>(cat);
          consider(gs[cat], hs[cat], s);
        }
      } else {
        const auto& o = order[c];
        double gl = 0.0, hl = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
          gl += g[o[j]];
          hl += h[o[j]];
          const double v = data.rows[o[j]][c];
          const double next = data.rows[o[j + 1]][c];
          if (next == v) continue;
          Stump s;
          s.column = c;
          s.threshold = 0.5 * (v + next);
          consider(gl, hl, s);
        }
      }
    }
    if (!best.found) break;
    for (std::size_t i = 0; i < n; ++i) margin[i] += best.stump.Eval(data.rows[i]);
    stumps.push_back(best.stump);
  }
  return std::make_shared<BoostedStumps>(schema, base, std::move(stumps));
}

}  // namespace mace
