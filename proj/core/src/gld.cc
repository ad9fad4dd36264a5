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

#include "mace/gld.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "mace/errors.h"

namespace mace {

int GldParams::Sweeps() const {
  return std::max(1, static_cast<int>(std::ceil(std::log2(max_radius / min_radius))));
}

std::vector<double> GldParams::Radii() const {
  std::vector<double> r;
  double radius = max_radius;
  for (int k = 0; k < Sweeps(); ++k) {
    radius /= 2.0;
    r.push_back(radius);
  }
  return r;
}

void GldParams::Validate() const {
  if (!(min_radius > 0.0 && min_radius < max_radius && max_radius <= 1.0)) {
    throw ConfigError("GLD radii must satisfy 0 < r < R <= 1");
  }
  if (epochs < 1) throw ConfigError("GLD epochs must be >= 1");
}

double FineTuneObjective(const Instance& x_norm, const Instance& z_norm,
                         std::span<const std::size_t> columns) {
  if (columns.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t c : columns) sum += std::abs(z_norm[c] - x_norm[c]);
  return sum / static_cast<double>(columns.size());
}

CfExample FineTune(const Instance& x, const TargetSpec& target,
                   const ClassifierHandle& model, const CfExample& cf,
                   const EncoderState& enc, const GldParams& params,
                   std::mt19937_64& rng) {
  params.Validate();
  if (!cf.valid) return cf;
  const auto& schema = enc.schema();
  std::vector<std::size_t> cols;
  for (std::size_t c : cf.changed) {
    if (!schema.is_categorical(c)) cols.push_back(c);
  }
  if (cols.empty()) return cf;

  const Instance x_norm = enc.Normalize(x);
  Instance z = enc.Normalize(cf.instance);
  double z_obj = FineTuneObjective(x_norm, z, cols);
  Instance best_raw = cf.instance;
  std::vector<double> best_probs;
  double best_obj = z_obj;

  const auto radii = params.Radii();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Instance> norm_props(radii.size());
  std::vector<Instance> raw_props(radii.size());
  for (int t = 0; t < params.epochs; ++t) {
    for (std::size_t k = 0; k < radii.size(); ++k) {
      norm_props[k] = z;
      raw_props[k] = cf.instance;
      for (std::size_t c : cols) {
        const double step = gauss(rng) * radii[k];
        norm_props[k][c] = std::clamp(z[c] + step, 0.0, 1.0);
        raw_props[k][c] = enc.DenormalizeValue(c, norm_props[k][c]);
      }
    }
    const auto probs = model.PredictProbaMany(raw_props);
    std::size_t pick = radii.size();
    double pick_obj = z_obj;
    for (std::size_t k = 0; k < radii.size(); ++k) {
      if (!IsTargetPredicted(probs[k], target.target)) continue;
      const double obj = FineTuneObjective(x_norm, norm_props[k], cols);
      if (obj < pick_obj) {
        pick_obj = obj;
        pick = k;
      }
    }
    if (pick == radii.size()) continue;
    z = norm_props[pick];
    z_obj = pick_obj;
    if (z_obj < best_obj &&
        Proximity(x, raw_props[pick], enc) >= cf.proximity) {
      best_obj = z_obj;
      best_raw = raw_props[pick];
      best_probs = probs[pick];
    }
  }
  // A column that can return exactly to its query value does so.
  for (std::size_t c : cols) {
    if (best_raw[c] == x[c]) continue;
    Instance snapped = best_raw;
    snapped[c] = x[c];
    auto probs = model.PredictProba(snapped);
    if (!IsTargetPredicted(probs, target.target)) continue;
    best_raw = std::move(snapped);
    best_probs = std::move(probs);
  }
  if (best_probs.empty()) return cf;
  auto out = MakeExample(x, std::move(best_raw), best_probs, target, enc,
                         cf.provenance);
  out.fine_tuned = true;
  return out;
}

double GldObjective(const Instance& x, const Instance& cf,
                    const EncoderState& enc) {
  const auto d = static_cast<double>(x.size());
  return d == 0 ? 0.0 : -Proximity(x, cf, enc) / d;
}

std::vector<CfExample> GldOptimize(const Instance& x, const TargetSpec& target,
                                   const ClassifierHandle& model,
                                   const CandidateFeatures& candidates,
                                   const ClassIndex& index,
                                   const EncoderState& enc,
                                   const GldParams& params,
                                   std::mt19937_64& rng) {
  params.Validate();
  if (candidates.empty()) return {};
  const auto& schema = enc.schema();

  Instance z;
  std::vector<double> z_probs;
  for (std::size_t row : candidates.neighbor_rows) {
    Instance seed = x;
    for (const auto& c : candidates.columns) {
      seed[c.column] = index.instance(row)[c.column];
    }
    auto probs = model.PredictProba(seed);
    if (IsTargetPredicted(probs, target.target)) {
      z = std::move(seed);
      z_probs = std::move(probs);
      break;
    }
  }
  if (z_probs.empty()) return {};

  std::vector<CfExample> found{
      MakeExample(x, z, z_probs, target, enc, Provenance::kGld)};
  std::set<std::vector<double>> seen{z.values};
  double z_obj = GldObjective(x, z, enc);

  const auto radii = params.Radii();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Instance> props(radii.size());
  for (int t = 0; t < params.epochs; ++t) {
    const auto changed = ChangedColumns(x, z);
    for (std::size_t k = 0; k < radii.size(); ++k) {
      props[k] = z;
      const double revert = radii[k] / params.max_radius;
      for (std::size_t c : changed) {
        if (unit(rng) < revert) {
          props[k][c] = x[c];
        } else if (!schema.is_categorical(c)) {
          const double moved = std::clamp(
              enc.NormalizeValue(c, z[c]) + gauss(rng) * radii[k], 0.0, 1.0);
          props[k][c] = enc.DenormalizeValue(c, moved);
        }
      }
    }
    const auto probs = model.PredictProbaMany(props);
    std::size_t pick = radii.size();
    double pick_obj = z_obj;
    for (std::size_t k = 0; k < radii.size(); ++k) {
      if (!IsTargetPredicted(probs[k], target.target)) continue;
      if (seen.insert(props[k].values).second) {
        found.push_back(
            MakeExample(x, props[k], probs[k], target, enc, Provenance::kGld));
      }
      const double obj = GldObjective(x, props[k], enc);
      if (obj < pick_obj) {
        pick_obj = obj;
        pick = k;
      }
    }
    if (pick == radii.size()) continue;
    z = props[pick];
    z_obj = pick_obj;
  }

  // Keep the examples no other example beats on both sparsity and proximity.
  std::vector<CfExample> front;
  for (const auto& a : found) {
    const bool dominated = std::any_of(
        found.begin(), found.end(), [&](const CfExample& b) {
          return b.sparsity <= a.sparsity && b.proximity >= a.proximity &&
                 (b.sparsity < a.sparsity || b.proximity > a.proximity);
        });
    if (!dominated) front.push_back(a);
  }
  std::stable_sort(front.begin(), front.end(),
                   [](const CfExample& a, const CfExample& b) {
                     return a.proximity > b.proximity;
                   });
  return front;
}

}  // namespace mace
