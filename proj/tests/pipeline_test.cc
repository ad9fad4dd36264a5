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

#include <cmath>
#include <set>

#include "envs.h"
#include "json.hpp"
#include "mace/config.h"
#include "mace/errors.h"
#include "mace/pipeline.h"

namespace mace {
namespace {

TEST(PipelineConfig, Defaults) {
  const PipelineConfig c;
  EXPECT_EQ(c.method, Method::kMaceRl);
  EXPECT_EQ(c.candidates.neighbors, 30);
  EXPECT_EQ(c.candidates.max_columns, 10);
  EXPECT_EQ(c.candidates.max_values, 3);
  EXPECT_EQ(c.selection.k_cap, 3);
  EXPECT_EQ(c.gld.epochs, 20);
  EXPECT_EQ(c.rl.samples, 80);
  EXPECT_TRUE(c.fine_tune);
}

TEST(PipelineConfig, JsonRoundTripAndOverrides) {
  PipelineConfig c;
  c.seed = 77;
  c.method = Method::kMaceGld;
  c.rl.entropy = EntropyTerm::kBernoulli;
  c.actionable = {"Age"};
  c.target = 1;
  const auto back = PipelineConfig::FromJson(c.ToJson());
  EXPECT_EQ(back.ToJson(), c.ToJson());

  const auto partial = PipelineConfig::FromJson(R"({"seed": 5, "rl": {"epochs": 3}})");
  EXPECT_EQ(partial.seed, 5u);
  EXPECT_EQ(partial.rl.epochs, 3);
  EXPECT_EQ(partial.rl.batch_size, 40);

  EXPECT_THROW(PipelineConfig::FromJson(R"({"sed": 5})"), ConfigError);
  EXPECT_THROW(PipelineConfig::FromJson(R"({"method": "magic"})"), ConfigError);
  EXPECT_THROW(PipelineConfig::FromJson("{"), ConfigError);
}

TEST(PipelineConfig, ValidatesColumnsAndRanges) {
  const auto sf = testenv::MakeSingleFlipEnv(1);
  PipelineConfig c;
  c.actionable = {"c0", "nope"};
  EXPECT_THROW(c.Validate(sf.env->data.schema), ConfigError);
  c.actionable = {"c3", "c1"};
  EXPECT_EQ(c.ActionableColumns(sf.env->data.schema),
            (std::vector<std::size_t>{1, 3}));
  c = {};
  c.workers = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
  EXPECT_EQ(ParseMethods("mace_rl,greedy_baseline"),
            (std::vector<Method>{Method::kMaceRl, Method::kGreedyBaseline}));
}

class SingleFlipPipeline : public ::testing::Test {
 protected:
  void SetUp() override { sf_ = testenv::MakeSingleFlipEnv(41); }
  Instance Flip(const Instance& x) const {
    Instance z = x;
    z[sf_.column] = sf_.value;
    return z;
  }
  testenv::SingleFlip sf_;
};

TEST_F(SingleFlipPipeline, RlTopExampleIsTheFlip) {
  PipelineConfig config;
  config.seed = 3;
  for (std::size_t q = 0; q < 10; ++q) {
    const auto& x = sf_.queries[q];
    const auto r = Explain(x, {0, 1}, sf_.env->env(), config, q);
    ASSERT_FALSE(r.examples.empty());
    EXPECT_FALSE(r.fallback);
    EXPECT_EQ(r.examples[0].instance, Flip(x)) << "query " << q;
    EXPECT_EQ(r.examples[0].sparsity, 1);
    EXPECT_TRUE(r.examples[0].valid);
    EXPECT_LE(r.examples.size(), 3u);
    EXPECT_FALSE(r.policy_features.empty());
  }
}

TEST_F(SingleFlipPipeline, GreedyBaselineOneChange) {
  const auto& x = sf_.queries[0];
  const auto c = SelectCandidates(x, {0, 1}, sf_.env->index, sf_.env->enc, {});
  const auto e = GreedyBaseline(x, {0, 1}, sf_.env->handle, c, sf_.env->enc, 8);
  EXPECT_EQ(e.instance, Flip(x));
  EXPECT_EQ(e.provenance, Provenance::kBaselineGreedy);
}

TEST_F(SingleFlipPipeline, GreedyBaselineExhaustsOnConstantModel) {
  const auto& x = sf_.queries[0];
  const auto c = SelectCandidates(x, {0, 1}, sf_.env->index, sf_.env->enc, {});
  const ClassifierHandle flat(std::make_shared<ConstantClassifier>(
      std::vector<double>{0.7, 0.3}));
  const auto e = GreedyBaseline(x, {0, 1}, flat, c, sf_.env->enc, 3);
  EXPECT_FALSE(e.valid);
  EXPECT_EQ(e.sparsity, 3);
}

TEST_F(SingleFlipPipeline, AlreadyTargetEchoesQuery) {
  const auto x = Flip(sf_.queries[0]);
  const auto r = Explain(x, {0, 1}, sf_.env->env(), {});
  EXPECT_TRUE(r.already_target);
  ASSERT_EQ(r.examples.size(), 1u);
  EXPECT_EQ(r.examples[0].instance, x);
  EXPECT_EQ(r.examples[0].sparsity, 0);
  EXPECT_EQ(r.examples[0].proximity, 0.0);
}

TEST_F(SingleFlipPipeline, FallbackWhenActionableColumnsCannotFlip) {
  PipelineConfig config;
  config.actionable = {"c0", "c1"};
  for (Method m : {Method::kMaceRl, Method::kMaceGld}) {
    config.method = m;
    const auto& x = sf_.queries[0];
    const auto r = Explain(x, {0, 1}, sf_.env->env(), config);
    EXPECT_TRUE(r.fallback);
    ASSERT_EQ(r.examples.size(), 1u);
    EXPECT_EQ(r.examples[0].provenance, Provenance::kFallbackNn);
    EXPECT_TRUE(r.examples[0].valid);
    EXPECT_TRUE(sf_.env->handle.Predicts(r.examples[0].instance, 1));
  }
}

TEST_F(SingleFlipPipeline, GldVariantIsLabelled) {
  PipelineConfig config;
  config.method = Method::kMaceGld;
  const auto& x = sf_.queries[2];
  const auto r = Explain(x, {0, 1}, sf_.env->env(), config, 2);
  ASSERT_FALSE(r.examples.empty());
  EXPECT_EQ(r.examples[0].instance, Flip(x));
  bool noted = false;
  for (const auto& n : r.notes) noted |= n.find("variant") != std::string::npos;
  EXPECT_TRUE(noted);
}

TEST(Explain, UnreachableTarget) {
  const auto env = testenv::MakeEnv(
      testenv::RandomRows(testenv::CategoricalSchema(3, 3), 40, 2),
      std::make_shared<ConstantClassifier>(std::vector<double>{0.8, 0.2}));
  EXPECT_THROW(Explain(env->data.rows[0], {0, 1}, env->env(), {}), TargetUnreachable);
}

TEST(Explain, MultiClassNeedsTarget) {
  const auto env = testenv::MakeEnv(
      testenv::RandomRows(testenv::CategoricalSchema(3, 3), 40, 2),
      std::make_shared<ConstantClassifier>(std::vector<double>{0.5, 0.3, 0.2}));
  EXPECT_THROW(ResolveTarget(env->data.rows[0], env->handle, {}), ConfigError);
  PipelineConfig c;
  c.target = 2;
  EXPECT_EQ(ResolveTarget(env->data.rows[0], env->handle, c).target, 2);
}

// Invariants of every report on a realistic model.
class CensusPipeline : public ::testing::TestWithParam<Method> {};

TEST_P(CensusPipeline, ReportInvariants) {
  const auto ce = testenv::MakeCensusEnv("stumps", 42);
  const auto& env = *ce.env;
  PipelineConfig config;
  config.method = GetParam();
  config.seed = 9;
  std::size_t done = 0;
  for (std::size_t q = 0; q < ce.test.size() && done < 15; ++q) {
    const auto& x = ce.test.rows[q];
    const auto t = ResolveTarget(x, env.handle, config);
    const auto r = Explain(x, t, env.env(), config, q);
    ++done;
    ASSERT_FALSE(r.examples.empty());
    EXPECT_LE(r.examples.size(), 3u);
    std::set<std::size_t> cand;
    for (const auto& c : r.candidates.columns) cand.insert(c.column);
    for (std::size_t i = 0; i < r.examples.size(); ++i) {
      const auto& e = r.examples[i];
      EXPECT_EQ(e.valid, env.handle.Predicts(e.instance, t.target));
      EXPECT_EQ(e.changed, ChangedColumns(x, e.instance));
      EXPECT_EQ(e.proximity, Proximity(x, e.instance, env.enc));
      if (e.provenance != Provenance::kFallbackNn) {
        for (std::size_t c : e.changed) EXPECT_TRUE(cand.count(c)) << c;
      }
      if (i > 0) EXPECT_GE(r.examples[i - 1].proximity, e.proximity);
    }
    if (config.method != Method::kGreedyBaseline) EXPECT_TRUE(r.examples[0].valid);
    const auto again = Explain(x, t, env.env(), config, q);
    ASSERT_EQ(again.examples.size(), r.examples.size());
    for (std::size_t i = 0; i < r.examples.size(); ++i) {
      EXPECT_EQ(again.examples[i].instance, r.examples[i].instance);
    }
    const auto text = ReportToText(r, env.data.schema);
    EXPECT_NE(text.find("->"), std::string::npos);
    const auto json = nlohmann::json::parse(ReportToJson(r, env.data.schema));
    EXPECT_EQ(json.at("examples").size(), r.examples.size());
  }
}

INSTANTIATE_TEST_SUITE_P(Methods, CensusPipeline,
                         ::testing::Values(Method::kMaceRl, Method::kMaceGld,
                                           Method::kGreedyBaseline));

TEST(FineTuneInPipeline, NeverHurtsTheExamples) {
  const auto ce = testenv::MakeCensusEnv("logistic", 43);
  const auto& env = *ce.env;
  PipelineConfig on, off;
  off.fine_tune = false;
  int tuned = 0;
  for (std::size_t q = 0; q < 15; ++q) {
    const auto& x = ce.test.rows[q];
    const auto t = ResolveTarget(x, env.handle, on);
    const auto a = Explain(x, t, env.env(), on, q);
    const auto b = Explain(x, t, env.env(), off, q);
    ASSERT_FALSE(a.examples.empty());
    ASSERT_FALSE(b.examples.empty());
    EXPECT_GE(a.examples[0].proximity, b.examples[0].proximity - 1e-12);
    for (const auto& e : a.examples) {
      EXPECT_TRUE(e.valid);
      tuned += e.fine_tuned;
    }
  }
  EXPECT_GT(tuned, 0);
}

TEST(GreedyBaseline, ChangesOrderedByMarginalGain) {
  // Additive logit: each column adds its own weight when set to value 1.
  class Additive : public Classifier {
   public:
    int ClassCount() const override { return 2; }
    std::vector<double> PredictProba(const Instance& x) const override {
      const double w[4] = {0.5, 2.0, 1.0, 0.1};
      double z = -3.2;
      for (std::size_t i = 0; i < 4; ++i) z += w[i] * x[i];
      const double p = 1.0 / (1.0 + std::exp(-z));
      return {1 - p, p};
    }
    std::string Kind() const override { return "additive"; }
  };
  const ClassifierHandle model(std::make_shared<Additive>());
  const Dataset d = testenv::RandomRows(testenv::CategoricalSchema(4, 2), 20, 1);
  const auto enc = FitEncoders(d, 2);
  CandidateFeatures c;
  for (std::size_t i = 0; i < 4; ++i) {
    c.columns.push_back({i, 1, {{1, 1.0, 1}}});
  }
  const Instance x{{0, 0, 0, 0}};
  const auto e = GreedyBaseline(x, {0, 1}, model, c, enc, 4);
  // Gains are 2.0, then 1.0, then 0.5: logit -3.2 -> -1.2 -> -0.2 -> 0.3.
  EXPECT_EQ(e.instance.values, (std::vector<double>{1, 1, 1, 0}));
  EXPECT_TRUE(e.valid);
}

TEST(QueryRng, StreamsDifferAndRepeat) {
  auto a = QueryRng(1, 0), b = QueryRng(1, 0), c = QueryRng(1, 1), d = QueryRng(2, 0);
  const auto va = a();
  EXPECT_EQ(va, b());
  EXPECT_NE(va, c());
  EXPECT_NE(va, d());
}

TEST(EvaluateRun, ShapeValidityAndWorkerIndependence) {
  const auto sf = testenv::MakeSingleFlipEnv(44);
  std::vector<Instance> queries(sf.queries.begin(), sf.queries.begin() + 10);
  PipelineConfig config;
  config.seed = 4;
  const std::vector<Method> methods{Method::kMaceRl, Method::kGreedyBaseline};
  const auto r1 = EvaluateRun(queries, sf.env->env(), config, methods, "flip");
  config.workers = 4;
  const auto r4 = EvaluateRun(queries, sf.env->env(), config, methods, "flip");
  ASSERT_EQ(r1.table.rows.size(), 2u);
  EXPECT_EQ(r1.table.rows[0].method, "mace_rl");
  EXPECT_EQ(r1.table.rows[0].queries, 10u);
  EXPECT_EQ(r1.table.rows[0].validity, 1.0);
  EXPECT_EQ(r1.table.rows[0].sparsity, 1.0);
  EXPECT_EQ(r1.table.rows[1].validity, 1.0);
  EXPECT_FALSE(r1.any_error);
  EXPECT_EQ(r1.table.ToRecords(), r4.table.ToRecords());
  for (const auto& row : r1.table.rows) EXPECT_GT(row.seconds_per_query, 0.0);
}

TEST(EvaluateRun, SkipsQueriesAlreadyInTarget) {
  const auto sf = testenv::MakeSingleFlipEnv(45);
  std::vector<Instance> queries(sf.queries.begin(), sf.queries.begin() + 5);
  Instance done = queries[0];
  done[sf.column] = sf.value;
  queries.push_back(done);
  PipelineConfig config;
  config.target = 1;
  const auto r = EvaluateRun(queries, sf.env->env(), config, {Method::kMaceRl}, "flip");
  EXPECT_EQ(r.table.rows[0].queries, 5u);
}

}  // namespace
}  // namespace mace
