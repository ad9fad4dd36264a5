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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "envs.h"
#include "json.hpp"
#include "mace/artifacts.h"
#include "mace/brute_force.h"
#include "mace/demo_models.h"
#include "mace/errors.h"
#include "mace/gld.h"
#include "mace/metrics.h"
#include "mace/pipeline.h"
#include "mace/policy.h"
#include "mace/timeseries.h"

namespace mace {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

double Since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// 1. Deterministic-policy optimum equals the brute-force optimum.
Outcome OracleEquivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  int done = 0, equal = 0;
  std::string first_mismatch;
  for (std::uint64_t trial = 0; done < 50; ++trial) {
    std::uniform_int_distribution<int> ncols(4, 7), ncats(3, 5), s_pick(1, 4),
        m_pick(1, 3), w_pick(1, 3);
    const auto schema = testenv::CategoricalSchema(
        static_cast<std::size_t>(ncols(rng)), static_cast<std::size_t>(ncats(rng)));
    Dataset data = testenv::RandomRows(schema, 300, 1000 + trial);
    std::normal_distribution<double> wdist(0.0, 1.0);
    std::vector<double> w(schema.size());
    for (auto& v : w) v = wdist(rng);
    std::vector<double> score;
    for (const auto& r : data.rows) {
      double z = 0.0;
      for (std::size_t c = 0; c < w.size(); ++c) z += w[c] * r[c];
      score.push_back(z);
    }
    auto sorted = score;
    std::nth_element(sorted.begin(), sorted.begin() + 150, sorted.end());
    for (std::size_t i = 0; i < score.size(); ++i) {
      data.labels[i] = score[i] > sorted[150] ? 1 : 0;
    }
    std::shared_ptr<const Classifier> model;
    if (trial % 2 == 0) {
      model = TrainBoostedStumps(data, StumpOptions{20, 0.3, 1.0});
    } else {
      model = TrainLogistic(data, LogisticOptions{100, 0.5});
    }
    const auto env = testenv::MakeEnv(data, model);
    const int s = s_pick(rng), m = m_pick(rng), wmax = w_pick(rng);
    // First test row whose target class is populated and yields candidates.
    for (std::size_t q = 0; q < env->data.size(); ++q) {
      const auto& x = env->data.rows[q];
      const TargetSpec t{env->handle.PredictClass(x), 1 - env->handle.PredictClass(x)};
      if (env->index.ClassSize(t.target) == 0) break;
      CandidateOptions opt;
      opt.max_columns = s;
      opt.max_values = m;
      const auto cand = SelectCandidates(x, t, env->index, env->enc, opt);
      if (cand.empty()) continue;
      const auto a = DeterministicPolicyOptimum(x, t, env->handle, cand, wmax);
      const auto b = BruteForceOptimal(x, t, env->handle, cand, wmax);
      ++done;
      if (a.score == b.score) {
        ++equal;
      } else if (first_mismatch.empty()) {
        first_mismatch = " first mismatch trial " + std::to_string(trial);
      }
      break;
    }
  }
  const double secs = Since(t0);
  return {equal == 50 && secs < 10.0,
          std::to_string(equal) + "/50 optima equal in " + Fmt("%.2f s", secs) +
              first_mismatch};
}

// 2. Log-probability gradient against central differences.
Outcome PolicyGradient() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> ncols(1, 6), nvals(1, 4);
  std::normal_distribution<double> n(0.0, 2.0);
  double worst = 0.0;
  for (int pair = 0; pair < 100; ++pair) {
    CandidateFeatures c;
    const int s = ncols(rng);
    for (int i = 0; i < s; ++i) {
      CandidateColumn col;
      col.column = static_cast<std::size_t>(i);
      col.count = 1;
      const int k = nvals(rng);
      for (int v = 0; v < k; ++v) col.values.push_back({v + 1, v + 1.0, 1});
      c.columns.push_back(col);
    }
    auto theta = PolicyParams::Uniform(c);
    for (auto& l : theta.p_logits) l = n(rng);
    for (auto& row : theta.q_logits) {
      for (auto& l : row) l = n(rng);
    }
    const Action a = SampleAction(theta, rng);
    const auto g = PolicyLogProbGradient(theta, a).Flatten();
    auto flat = theta.Flatten();
    for (std::size_t i = 0; i < flat.size(); ++i) {
      const double h = 1e-6;
      auto up = theta, down = theta;
      auto fu = flat, fd = flat;
      fu[i] += h;
      fd[i] -= h;
      up.Unflatten(fu);
      down.Unflatten(fd);
      const double num = (PolicyLogProb(up, a) - PolicyLogProb(down, a)) / (2 * h);
      worst = std::max(worst, std::abs(num - g[i]) / std::max(1.0, std::abs(g[i])));
    }
  }
  return {worst <= 1e-5, "max relative error " + Fmt("%.2e", worst)};
}

// 3. Single-flip environment.
Outcome SingleFlip() {
  const auto sf = testenv::MakeSingleFlipEnv(21);
  const auto& env = *sf.env;
  const auto& schema = env.data.schema;
  // Exhaustive check: exactly one single change flips each query.
  for (const auto& x : sf.queries) {
    int flips = 0;
    for (std::size_t c = 0; c < schema.size(); ++c) {
      for (std::size_t v = 0; v < schema.column(c).categories.size(); ++v) {
        if (static_cast<double>(v) == x[c]) continue;
        Instance z = x;
        z[c] = static_cast<double>(v);
        if (env.handle.Predicts(z, 1)) {
          ++flips;
          if (c != sf.column || z[c] != sf.value) return {false, "second flip exists"};
        }
      }
    }
    if (flips != 1) return {false, "query without a unique flip"};
  }
  PipelineConfig config;
  config.seed = 21;
  const auto run = EvaluateRun(sf.queries, env.env(), config, {Method::kMaceRl},
                               "single_flip");
  const auto& row = run.table.rows.at(0);

  int named = 0, first = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    PipelineConfig c;
    c.seed = trial;
    const auto& x = sf.queries[trial % sf.queries.size()];
    const auto r = Explain(x, {0, 1}, env.env(), c, trial);
    for (const auto& f : r.policy_features) {
      if (f.column == sf.column && f.value == sf.value) {
        ++named;
        first += &f == &r.policy_features.front();
        break;
      }
    }
  }
  const bool pass = !run.any_error && row.validity == 1.0 && row.sparsity == 1.0 &&
                    named >= 95;
  return {pass, std::to_string(row.queries) + " queries, validity " +
                    Fmt("%.2f", row.validity) + ", sparsity " +
                    Fmt("%.2f", row.sparsity) + ", planted pair named in " +
                    std::to_string(named) + "/100 trials (ranked first in " +
                    std::to_string(first) + ")"};
}

// 4 and 5 share one census run.
struct CensusRun {
  testenv::CensusEnv ce;
  EvaluateResult result;
  bool ok = false;
};

CensusRun& Census() {
  static CensusRun run = [] {
    CensusRun r;
    r.ce = testenv::MakeCensusEnv("stumps", 7);
    PipelineConfig config;
    config.seed = 7;
    config.workers = 1;
    config.max_queries = 100;
    r.result = EvaluateRun(r.ce.test.rows, r.ce.env->env(), config,
                           {Method::kMaceRl}, "census");
    r.ok = true;
    return r;
  }();
  return run;
}

Outcome CensusScale() {
  const auto& run = Census();
  const auto& row = run.result.table.rows.at(0);
  const bool pass = !run.result.any_error && row.queries == 100 &&
                    row.validity == 1.0 && row.sparsity <= 3.0 &&
                    row.seconds_per_query < 1.0;
  return {pass, std::to_string(row.queries) + " queries, validity " +
                    Fmt("%.2f", row.validity) + " (" +
                    std::to_string(row.fallbacks) + " fallbacks), sparsity " +
                    Fmt("%.2f", row.sparsity) + ", " +
                    Fmt("%.3f s/query", row.seconds_per_query)};
}

Outcome DiversityCap() {
  const auto& run = Census();
  const auto& reports = run.result.reports.at(0);
  std::size_t queries = 0, worst = 0;
  double lo = 1.0, hi = 0.0;
  bool ok = reports.size() == 100;
  for (const auto& r : reports) {
    ++queries;
    if (r.examples.size() > 3) ok = false;
    std::map<std::size_t, std::size_t> uses;
    for (const auto& e : r.examples) {
      for (std::size_t c : e.changed) worst = std::max(worst, ++uses[c]);
    }
    if (const auto d = PairwiseDiversity(r.examples)) {
      lo = std::min(lo, *d);
      hi = std::max(hi, *d);
      if (*d < 0.0 || *d > 1.0) ok = false;
    }
  }
  const auto& row = run.result.table.rows.at(0);
  if (row.diversity && (*row.diversity < 0.0 || *row.diversity > 1.0)) ok = false;
  ok = ok && worst <= 3;
  return {ok, std::to_string(queries) + " queries, max column reuse " +
                  std::to_string(worst) + ", diversity " +
                  (row.diversity ? Fmt("%.3f", *row.diversity) : "n/a") +
                  " (per-query range " + Fmt("%.3f", lo) + ".." + Fmt("%.3f", hi) +
                  ")"};
}

// 6. Fine-tuning on the threshold classifier.
Outcome GldBoundary() {
  const auto env = testenv::MakeThresholdEnv(0.6);
  const Instance x{{0.0}};
  const TargetSpec t{0, 1};
  std::mt19937_64 rng(6);
  const auto start = MakeExample(x, Instance{{0.9}}, t, env->handle, env->enc,
                                 Provenance::kRlGreedy);
  const auto t0 = std::chrono::steady_clock::now();
  const auto out = FineTune(x, t, env->handle, start, env->enc, {}, rng);
  const double secs = Since(t0);
  const double z = out.instance[0];
  bool ok = z >= 0.6 && z <= 0.65 && out.valid && secs < 0.1;

  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::size_t> cols{0};
  int broken = 0;
  for (int i = 0; i < 1000; ++i) {
    const Instance xi{{u(rng) * 0.6}};
    const Instance zi{{0.6 + u(rng) * 0.4}};
    const auto in = MakeExample(xi, zi, t, env->handle, env->enc, Provenance::kRlGreedy);
    const auto o = FineTune(xi, t, env->handle, in, env->enc, {}, rng);
    const auto xn = env->enc.Normalize(xi), before = env->enc.Normalize(zi),
               after = env->enc.Normalize(o.instance);
    if (FineTuneObjective(xn, after, cols) > FineTuneObjective(xn, before, cols) ||
        !env->handle.Predicts(o.instance, 1) || !o.valid) {
      ++broken;
    }
  }
  ok = ok && broken == 0;
  return {ok, "z " + Fmt("%.4f", z) + " in " + Fmt("%.4f s", secs) + "; " +
                  std::to_string(broken) + "/1000 starts regressed"};
}

// Report lines with the wall-clock timings removed.
std::string WithoutTimings(const std::string& jsonl) {
  std::istringstream in(jsonl);
  std::string out;
  for (std::string line; std::getline(in, line);) {
    auto j = nlohmann::json::parse(line);
    j.erase("timings");
    out += j.dump() + "\n";
  }
  return out;
}

fs::path Scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() /
                     ("mace_accept_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int Cli(std::vector<std::string> args, std::string* err_out = nullptr) {
  args.insert(args.begin(), "mace");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::Run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_out) *err_out = err.str();
  return code;
}

// 7. Byte-identical metric records from two evaluate runs.
Outcome Determinism() {
  const auto root = Scratch("determinism");
  const auto raw = root / "raw", art = root / "art";
  std::string err;
  if (Cli({"synth-census", "--out", raw.string()}) != 0 ||
      Cli({"prepare", "--data", (raw / "census.csv").string(), "--schema",
           (raw / "census.schema.json").string(), "--out", art.string()}) != 0 ||
      Cli({"train-model", "--data", art.string(), "--model", "stumps"}) != 0) {
    return {false, "setup failed"};
  }
  WriteTextFile(root / "config.json",
                R"({"seed": 13, "workers": 3, "data": {"max_queries": 40}})");
  for (const char* out : {"run1", "run2"}) {
    if (Cli({"evaluate", "--data", art.string(), "--config",
             (root / "config.json").string(), "--methods",
             "mace_rl,mace_gld,greedy_baseline", "--out", (root / out).string()},
            &err) != 0) {
      return {false, "evaluate failed: " + err};
    }
  }
  const auto a = ReadTextFile(root / "run1" / "metrics.jsonl");
  const auto b = ReadTextFile(root / "run2" / "metrics.jsonl");
  const auto ra = WithoutTimings(ReadTextFile(root / "run1" / "reports.jsonl"));
  const auto rb = WithoutTimings(ReadTextFile(root / "run2" / "reports.jsonl"));
  fs::remove_all(root);
  return {!a.empty() && a == b,
          std::to_string(a.size()) + " bytes of metric records " +
              (a == b ? "identical" : "differ") + "; reports " +
              (ra == rb ? "identical" : "differ") + " apart from timings"};
}

// 8. The same evaluate suite under three model kinds.
Outcome ModelAgnostic() {
  const std::vector<Method> methods{Method::kMaceRl, Method::kMaceGld,
                                    Method::kGreedyBaseline};
  PipelineConfig config;
  config.seed = 8;
  config.max_queries = 30;
  std::string detail;
  bool ok = true;
  auto check = [&](const std::string& name, const EvaluateResult& r) {
    const bool good = !r.any_error && r.table.rows.size() == 3 &&
                      r.table.rows[0].validity == 1.0 &&
                      r.table.rows[1].validity == 1.0;
    ok = ok && good;
    detail += name + (good ? " ok" : " FAILED") + " (rl validity " +
              Fmt("%.2f", r.table.rows.empty() ? 0.0 : r.table.rows[0].validity) +
              "); ";
  };
  const auto logistic = testenv::MakeCensusEnv("logistic", 8);
  check("logistic", EvaluateRun(logistic.test.rows, logistic.env->env(), config,
                                methods, "census"));
  const auto stumps = testenv::MakeCensusEnv("stumps", 8);
  const auto local = EvaluateRun(stumps.test.rows, stumps.env->env(), config,
                                 methods, "census");
  check("stumps", local);
  {
    testenv::LoopbackScorer loop(stumps.env->model, stumps.env->data.schema);
    {
      const ClassifierHandle remote(loop.scorer());
      const auto index = ClassIndex::Build(stumps.env->data, remote, stumps.env->enc);
      const ExplainEnv env{&stumps.env->enc, &index, remote};
      const auto r = EvaluateRun(stumps.test.rows, env, config, methods, "census");
      check("remote", r);
      const bool same = r.table.ToRecords() == local.table.ToRecords();
      ok = ok && same;
      detail += std::string("remote records ") +
                (same ? "match" : "differ from") + " local stumps";
    }
    loop.Close();
  }
  return {ok, detail};
}

// 9. Time-series substitution on 5 classes and 20 series.
Outcome TimeSeries() {
  const auto train = SyntheticSeries(5, 20, 32, 20, 90);
  const auto queries = SyntheticSeries(5, 20, 32, 4, 91);
  const auto model = SeriesCentroidModel::Fit(train, 5);
  const auto env = SeriesEnv::Build(train, model);
  PipelineConfig config;
  config.seed = 9;
  int pairs = 0, valid = 0, copies_bad = 0, max_sparsity = 0, total_sparsity = 0;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto& x = queries.samples[q];
    const int predicted = ArgMax(model->PredictProba(x.series));
    for (int t = 0; t < 5; ++t) {
      if (t == predicted) continue;
      ++pairs;
      const auto e = TsExplain(x, t, env, config, q);
      if (e.examples.empty()) continue;
      const auto& cf = e.examples[0];
      if (cf.valid && ArgMax(model->PredictProba(cf.series)) == t) ++valid;
      max_sparsity = std::max(max_sparsity, cf.sparsity);
      total_sparsity += cf.sparsity;
      for (const auto& ex : e.examples) {
        for (std::size_t n = 0; n < x.series.size(); ++n) {
          bool from_train = ex.series[n] == x.series[n];
          for (const auto& s : ex.substitutions) {
            if (s.series == n) {
              from_train = ex.series[n] == train.samples[s.donor].series[n];
            }
          }
          if (!from_train) ++copies_bad;
        }
      }
    }
  }
  return {pairs > 0 && valid == pairs && copies_bad == 0,
          std::to_string(valid) + "/" + std::to_string(pairs) +
              " pairs valid, " + std::to_string(copies_bad) +
              " non-verbatim series, sparsity mean " +
              Fmt("%.2f", pairs ? static_cast<double>(total_sparsity) / pairs : 0.0) +
              " max " + std::to_string(max_sparsity)};
}

}  // namespace
}  // namespace mace

int main() {
  using mace::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"deterministic-policy optimum equals brute force", mace::OracleEquivalence},
      {"policy log-probability gradient", mace::PolicyGradient},
      {"single-flip recovery", mace::SingleFlip},
      {"census run with boosted stumps", mace::CensusScale},
      {"diversity cap", mace::DiversityCap},
      {"fine-tuning boundary", mace::GldBoundary},
      {"evaluate determinism", mace::Determinism},
      {"model agnosticism", mace::ModelAgnostic},
      {"time-series substitution", mace::TimeSeries},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = mace::Since(t0);
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
