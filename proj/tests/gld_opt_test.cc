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

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>
#include <set>

#include "envs.h"
#include "mace/candidates.h"
#include "mace/errors.h"
#include "mace/gld.h"

namespace mace {
namespace {

TEST(GldParams, DefaultsAndRadii) {
  const GldParams p;
  EXPECT_EQ(p.epochs, 20);
  EXPECT_EQ(p.max_radius, 0.25);
  EXPECT_EQ(p.min_radius, 0.0005);
  EXPECT_EQ(p.Sweeps(), 9);
  const auto r = p.Radii();
  ASSERT_EQ(r.size(), 9u);
  for (std::size_t k = 0; k < r.size(); ++k) {
    EXPECT_DOUBLE_EQ(r[k], p.max_radius / std::pow(2.0, static_cast<double>(k + 1)));
  }
  EXPECT_LE(r.back(), p.min_radius);
  EXPECT_LT(p.min_radius, r[r.size() - 2]);
}

TEST(GldParams, SweepBracketsMinRadius) {
  for (double r : {0.2, 0.1, 0.01, 0.003, 1e-5}) {
    GldParams p;
    p.min_radius = r;
    const auto radii = p.Radii();
    ASSERT_GE(radii.size(), 1u);
    EXPECT_LE(radii.back(), r);
    if (radii.size() > 1) EXPECT_LT(r, radii[radii.size() - 2]);
  }
}

TEST(GldParams, Validation) {
  GldParams p;
  p.min_radius = 0.3;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = {};
  p.max_radius = 1.5;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = {};
  p.epochs = 0;
  EXPECT_THROW(p.Validate(), ConfigError);
}

class Threshold : public ::testing::Test {
 protected:
  void SetUp() override { env_ = testenv::MakeThresholdEnv(0.6); }

  CfExample Start(double x, double z) const {
    return MakeExample(Instance{{x}}, Instance{{z}}, {0, 1}, env_->handle,
                       env_->enc, Provenance::kRlGreedy);
  }

  std::unique_ptr<testenv::TabularEnv> env_;
};

TEST_F(Threshold, FineTuneReachesTheBoundary) {
  std::mt19937_64 rng(1);
  const auto start = std::chrono::steady_clock::now();
  const auto out = FineTune(Instance{{0.0}}, {0, 1}, env_->handle, Start(0.0, 0.9),
                            env_->enc, {}, rng);
  const double secs = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - start).count();
  EXPECT_GE(out.instance[0], 0.6);
  EXPECT_LE(out.instance[0], 0.65);
  EXPECT_TRUE(out.valid);
  EXPECT_TRUE(out.fine_tuned);
  EXPECT_LT(secs, 0.1);
}

TEST_F(Threshold, ObjectiveNeverIncreases) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng) * 0.6;
    const double z = 0.6 + u(rng) * 0.4;
    const auto in = Start(x, z);
    ASSERT_TRUE(in.valid);
    const auto out = FineTune(Instance{{x}}, {0, 1}, env_->handle, in, env_->enc, {}, rng);
    const std::vector<std::size_t> cols{0};
    EXPECT_LE(FineTuneObjective(Instance{{x}}, out.instance, cols),
              FineTuneObjective(Instance{{x}}, in.instance, cols));
    EXPECT_TRUE(env_->handle.Predicts(out.instance, 1));
    EXPECT_GE(out.instance[0], 0.0);
    EXPECT_LE(out.instance[0], 1.0);
  }
}

TEST_F(Threshold, InvalidStartReturnedAsIs) {
  std::mt19937_64 rng(3);
  const auto in = Start(0.0, 0.3);
  ASSERT_FALSE(in.valid);
  const auto out = FineTune(Instance{{0.0}}, {0, 1}, env_->handle, in, env_->enc, {}, rng);
  EXPECT_EQ(out.instance, in.instance);
  EXPECT_FALSE(out.fine_tuned);
}

TEST_F(Threshold, AlreadyOptimalStaysPut) {
  std::mt19937_64 rng(4);
  const auto in = Start(0.7, 0.7);
  const auto out = FineTune(Instance{{0.7}}, {0, 1}, env_->handle, in, env_->enc, {}, rng);
  EXPECT_EQ(out.instance, in.instance);
  EXPECT_EQ(FineTuneObjective(Instance{{0.7}}, out.instance, std::vector<std::size_t>{0}), 0.0);
}

TEST_F(Threshold, SeededRunsAgree) {
  std::mt19937_64 a(5), b(5);
  const auto o1 = FineTune(Instance{{0.1}}, {0, 1}, env_->handle, Start(0.1, 0.95),
                           env_->enc, {}, a);
  const auto o2 = FineTune(Instance{{0.1}}, {0, 1}, env_->handle, Start(0.1, 0.95),
                           env_->enc, {}, b);
  EXPECT_EQ(o1.instance, o2.instance);
}

TEST(FineTune, CategoricalOnlyChangeIsUntouched) {
  const auto sf = testenv::MakeSingleFlipEnv(5);
  const auto& x = sf.queries[0];
  Instance z = x;
  z[sf.column] = sf.value;
  const auto in = MakeExample(x, z, {0, 1}, sf.env->handle, sf.env->enc,
                              Provenance::kRlSample);
  ASSERT_TRUE(in.valid);
  std::mt19937_64 rng(6);
  const auto out = FineTune(x, {0, 1}, sf.env->handle, in, sf.env->enc, {}, rng);
  EXPECT_EQ(out.instance, in.instance);
  EXPECT_FALSE(out.fine_tuned);
}

TEST(FineTune, MixedColumnsOnCensus) {
  const auto ce = testenv::MakeCensusEnv("logistic", 7);
  const auto& env = *ce.env;
  const auto& schema = env.data.schema;
  std::mt19937_64 rng(8);
  int tuned = 0;
  for (std::size_t q = 0; q < 60; ++q) {
    const auto& x = ce.test.rows[q];
    const auto t = OppositeOf(env.handle.PredictClass(x));
    // Start from the nearest target-class row: valid by construction.
    const auto nn = env.index.Nearest(t.target, x, env.enc, 1);
    const auto in = MakeExample(x, env.index.instance(nn[0].row), t, env.handle,
                                env.enc, Provenance::kFallbackNn);
    ASSERT_TRUE(in.valid);
    const auto out = FineTune(x, t, env.handle, in, env.enc, {}, rng);
    EXPECT_TRUE(env.handle.Predicts(out.instance, t.target));
    EXPECT_GE(out.proximity, in.proximity - 1e-12);
    std::vector<std::size_t> cont;
    for (std::size_t c : in.changed) {
      if (!schema.is_categorical(c)) cont.push_back(c);
    }
    EXPECT_LE(FineTuneObjective(env.enc.Normalize(x), env.enc.Normalize(out.instance), cont),
              FineTuneObjective(env.enc.Normalize(x), env.enc.Normalize(in.instance), cont));
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (schema.is_categorical(c)) {
        EXPECT_EQ(out.instance[c], in.instance[c]);
      } else {
        EXPECT_GE(out.instance[c], env.enc.column(c).min);
        EXPECT_LE(out.instance[c], env.enc.column(c).max);
      }
    }
    tuned += out.fine_tuned;
  }
  EXPECT_GT(tuned, 0);
}

TEST(GldOptimize, SingleFlipReturnsTheFlip) {
  const auto sf = testenv::MakeSingleFlipEnv(9);
  for (std::size_t q = 0; q < 10; ++q) {
    const auto& x = sf.queries[q];
    const auto c = SelectCandidates(x, {0, 1}, sf.env->index, sf.env->enc, {});
    std::mt19937_64 rng(q);
    const auto out = GldOptimize(x, {0, 1}, sf.env->handle, c, sf.env->index,
                                 sf.env->enc, {}, rng);
    Instance flip = x;
    flip[sf.column] = sf.value;
    ASSERT_EQ(out.size(), 1u) << "query " << q;
    EXPECT_EQ(out[0].instance, flip);
    EXPECT_EQ(out[0].provenance, Provenance::kGld);
  }
}

TEST(GldOptimize, InfeasibleModelGivesNothing) {
  const auto sf = testenv::MakeSingleFlipEnv(10);
  const auto& x = sf.queries[0];
  const auto c = SelectCandidates(x, {0, 1}, sf.env->index, sf.env->enc, {});
  const ClassifierHandle flat(std::make_shared<ConstantClassifier>(
      std::vector<double>{0.6, 0.4}));
  std::mt19937_64 rng(1);
  EXPECT_TRUE(GldOptimize(x, {0, 1}, flat, c, sf.env->index, sf.env->enc, {}, rng).empty());
}

TEST(GldOptimize, OptimalSeedIsKept) {
  // One candidate column, one change needed: nothing can improve on the seed.
  const auto sf = testenv::MakeSingleFlipEnv(11);
  const auto& x = sf.queries[0];
  auto c = SelectCandidates(x, {0, 1}, sf.env->index, sf.env->enc, {});
  std::vector<std::size_t> rows;
  for (std::size_t row : c.neighbor_rows) {
    if (sf.env->index.instance(row)[sf.column] == sf.value) rows.push_back(row);
  }
  CandidateFeatures only;
  for (const auto& col : c.columns) {
    if (col.column == sf.column) only.columns.push_back(col);
  }
  only.neighbor_rows = rows;
  std::mt19937_64 rng(2);
  const auto out = GldOptimize(x, {0, 1}, sf.env->handle, only, sf.env->index,
                               sf.env->enc, {}, rng);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].sparsity, 1);
}

TEST(GldOptimize, ParetoFrontOnCensus) {
  const auto ce = testenv::MakeCensusEnv("stumps", 12);
  const auto& env = *ce.env;
  for (std::size_t q = 0; q < 30; ++q) {
    const auto& x = ce.test.rows[q];
    const auto t = OppositeOf(env.handle.PredictClass(x));
    const auto c = SelectCandidates(x, t, env.index, env.enc, {});
    std::mt19937_64 a(q), b(q);
    const auto out = GldOptimize(x, t, env.handle, c, env.index, env.enc, {}, a);
    const auto again = GldOptimize(x, t, env.handle, c, env.index, env.enc, {}, b);
    ASSERT_EQ(out.size(), again.size());
    std::set<std::size_t> allowed;
    for (const auto& col : c.columns) allowed.insert(col.column);
    for (std::size_t i = 0; i < out.size(); ++i) {
      EXPECT_EQ(out[i].instance, again[i].instance);
      EXPECT_TRUE(out[i].valid);
      for (std::size_t col : out[i].changed) EXPECT_TRUE(allowed.count(col));
      if (i > 0) EXPECT_GE(out[i - 1].proximity, out[i].proximity);
      for (const auto& other : out) {
        const bool dominates = other.sparsity <= out[i].sparsity &&
                               other.proximity >= out[i].proximity &&
                               (other.sparsity < out[i].sparsity ||
                                other.proximity > out[i].proximity);
        EXPECT_FALSE(dominates);
      }
    }
  }
}

TEST(GldObjective, ScaledProximity) {
  const auto sf = testenv::MakeSingleFlipEnv(13);
  Instance x = sf.queries[0], z = x;
  z[0] = z[0] == 0.0 ? 1.0 : 0.0;
  z[1] = z[1] == 0.0 ? 1.0 : 0.0;
  EXPECT_DOUBLE_EQ(GldObjective(x, z, sf.env->enc), 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(GldObjective(x, x, sf.env->enc), 0.0);
}

}  // namespace
}  // namespace mace
