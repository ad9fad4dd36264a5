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

#include "cli.h"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mace/artifacts.h"
#include "mace/config.h"
#include "mace/demo_models.h"
#include "mace/errors.h"
#include "mace/pipeline.h"
#include "mace/remote_scorer.h"
#include "mace/synthetic.h"
#include "mace/timeseries.h"

namespace mace::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string data;
  std::string schema;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<int> target;
  std::optional<std::size_t> row;
  std::string values;
  std::string what_if;
  std::string methods;
  std::string method;
  std::string model;
  std::string scorer;
  std::string labels;
  std::size_t rows = 2000;
  std::size_t probe_rows = 20;
  int port = 0;
  bool stdio = false;
  bool once = false;
};

fs::path OutDir(const Options& o) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv("MACE_OUT_DIR"); env && *env) return env;
  return "mace-out";
}

PipelineConfig ResolveConfig(const Options& o) {
  PipelineConfig c;
  if (!o.config.empty()) c = PipelineConfig::FromFile(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.target) c.target = *o.target;
  if (!o.method.empty()) c.method = ParseMethod(o.method);
  if (!o.model.empty()) c.model_kind = o.model;
  c.Validate();
  return c;
}

// The model used for explanations: the remote scorer when given, otherwise
// the trained artifact model. The neighbour index must reflect the same
// model's predictions, so a remote scorer gets a fresh one.
struct LoadedEnv {
  ArtifactSet art;
  ClassifierHandle model;
  ClassIndex remote_index;
  bool remote = false;

  ExplainEnv env() const {
    return {&art.enc, remote ? &remote_index : &art.index, model};
  }
};

LoadedEnv LoadEnv(const Options& o, const PipelineConfig& config,
                  std::ostream& err) {
  LoadedEnv l;
  if (o.data.empty()) throw ConfigError("--data <artifact dir> is required");
  l.art = LoadArtifacts(o.data);
  config.Validate(l.art.schema);
  for (const auto& w : l.art.warnings) err << "warning: " << w << "\n";
  if (!o.scorer.empty()) {
    l.model = ClassifierHandle(ConnectScorer(o.scorer, l.art.schema));
    l.remote_index = ClassIndex::Build(l.art.train, l.model, l.art.enc);
    l.remote = true;
  } else {
    if (!l.art.model) {
      throw ArtifactError("no model in " + o.data + "; run train-model first");
    }
    l.model = ClassifierHandle(l.art.model);
  }
  return l;
}

std::string FormatProbs(const std::vector<double>& p, const Schema& schema) {
  std::ostringstream out;
  for (std::size_t c = 0; c < p.size(); ++c) {
    const auto& names = schema.label().classes;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", p[c]);
    out << (c ? "  " : "") << (c < names.size() ? names[c] : std::to_string(c))
        << "=" << buf;
  }
  return out.str();
}

double Accuracy(const Classifier& model, const Dataset& d) {
  if (d.size() == 0) return 0.0;
  const auto probs = model.PredictProbaMany(d.rows);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (ArgMax(probs[i]) == d.labels[i]) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(d.size());
}

int CmdSynthCensus(const Options& o, std::ostream& out) {
  const fs::path dir = OutDir(o);
  fs::create_directories(dir);
  const auto data = SyntheticCensus(o.rows, o.seed.value_or(7));
  SaveDataset(dir / "census.csv", data);
  WriteTextFile(dir / "census.schema.json", data.schema.ToJson());
  out << "wrote " << data.size() << " rows to " << (dir / "census.csv").string()
      << "\n";
  return kExitOk;
}

int CmdSynthSeries(const Options& o, std::ostream& out) {
  const fs::path dir = OutDir(o);
  fs::create_directories(dir);
  const auto data = SyntheticSeries(5, 20, 32, 40, o.seed.value_or(7));
  std::ofstream s(dir / "series.csv"), l(dir / "series_labels.csv");
  WriteSeriesCsv(s, l, data);
  out << "wrote " << data.size() << " samples to " << dir.string() << "\n";
  return kExitOk;
}

int CmdPrepare(const Options& o, std::ostream& out) {
  const auto config = ResolveConfig(o);
  if (o.data.empty() || o.schema.empty()) {
    throw ConfigError("prepare needs --data <csv> and --schema <json>");
  }
  const auto schema = Schema::FromFile(o.schema);
  config.Validate(schema);
  const auto data = LoadDataset(o.data, schema);
  auto [train, test] = SplitDataset(data, config.train_fraction, config.seed);
  const auto enc = FitEncoders(train, config.k_bins);
  const fs::path dir = OutDir(o);
  SavePrepared(dir, train, test, enc);
  WriteTextFile(dir / "config.json", config.ToJson());
  out << "prepared " << dir.string() << ": " << train.size() << " train, "
      << test.size() << " test rows\n";
  for (const auto& w : enc.warnings()) out << "warning: " << w << "\n";
  return kExitOk;
}

int CmdTrainModel(const Options& o, std::ostream& out) {
  const auto config = ResolveConfig(o);
  if (o.data.empty()) throw ConfigError("--data <artifact dir> is required");
  auto art = LoadArtifacts(o.data);
  config.Validate(art.schema);
  std::shared_ptr<Classifier> model;
  if (config.model_kind == "logistic") {
    model = TrainLogistic(art.train, config.logistic);
  } else {
    model = TrainBoostedStumps(art.train, config.stumps);
  }
  const auto index = ClassIndex::Build(art.train, ClassifierHandle(model), art.enc);
  SaveModelArtifacts(o.data, *model, index);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "train accuracy %.4f, test accuracy %.4f",
                Accuracy(*model, art.train), Accuracy(*model, art.test));
  out << "trained " << model->Kind() << " model: " << buf << "\n";
  return kExitOk;
}

Instance QueryFromOptions(const Options& o, const Dataset& test) {
  if (o.row) {
    if (*o.row >= test.size()) {
      throw ConfigError("--row " + std::to_string(*o.row) + " out of range (" +
                        std::to_string(test.size()) + " test rows)");
    }
    return test.rows[*o.row];
  }
  if (o.values.empty()) throw ConfigError("explain needs --row or --values");
  // Inline values must name every column.
  const auto& schema = test.schema;
  std::map<std::string, bool> named;
  std::istringstream in(o.values);
  for (std::string part; std::getline(in, part, ',');) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("bad value \"" + part + "\"");
    std::string name = part.substr(0, eq);
    while (!name.empty() && name.back() == ' ') name.pop_back();
    while (!name.empty() && name.front() == ' ') name.erase(name.begin());
    named[name] = true;
  }
  for (const auto& c : schema.columns()) {
    if (!named.count(c.name)) throw ConfigError("--values lacks " + c.name);
  }
  return ApplyEdits(schema, Instance{std::vector<double>(schema.size(), 0.0)},
                    o.values);
}

int CmdExplain(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = ResolveConfig(o);
  auto l = LoadEnv(o, config, err);
  const auto& schema = l.art.schema;
  Instance x = QueryFromOptions(o, l.art.test);

  if (!o.what_if.empty()) {
    x = ApplyEdits(schema, std::move(x), o.what_if);
    out << FormatProbs(l.model.PredictProba(x), schema) << "\n";
    return kExitOk;
  }
  const auto target = ResolveTarget(x, l.model, config);
  const auto report = Explain(x, target, l.env(), config, o.row.value_or(0));
  const fs::path dir = OutDir(o);
  fs::create_directories(dir);
  const std::string stem =
      o.row ? "report_row" + std::to_string(*o.row) : std::string("report");
  const auto text = ReportToText(report, schema);
  WriteTextFile(dir / (stem + ".txt"), text);
  WriteTextFile(dir / (stem + ".json"), ReportToJson(report, schema) + "\n");
  WriteTextFile(dir / "config.json", config.ToJson());
  out << text;
  return kExitOk;
}

int CmdEvaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = ResolveConfig(o);
  const auto methods = ParseMethods(
      o.methods.empty() ? std::string(MethodName(config.method)) : o.methods);
  auto l = LoadEnv(o, config, err);
  const auto& schema = l.art.schema;
  const auto result = EvaluateRun(l.art.test.rows, l.env(), config, methods,
                                  fs::path(o.data).filename().string());

  const fs::path dir = OutDir(o);
  fs::create_directories(dir);
  WriteTextFile(dir / "config.json", config.ToJson());
  WriteTextFile(dir / "metrics.txt", result.table.ToText());
  WriteTextFile(dir / "metrics.jsonl", result.table.ToRecords());
  WriteTextFile(dir / "timings.jsonl", result.table.TimingRecords());
  std::ostringstream json, text;
  for (const auto& per_method : result.reports) {
    for (const auto& r : per_method) {
      json << ReportToJson(r, schema) << "\n";
      text << ReportToText(r, schema) << "\n";
    }
  }
  WriteTextFile(dir / "reports.jsonl", json.str());
  WriteTextFile(dir / "reports.txt", text.str());
  out << result.table.ToText();
  if (result.any_error) {
    for (std::size_t m = 0; m < result.results.size(); ++m) {
      for (const auto& r : result.results[m]) {
        if (!r.ok()) {
          err << "error: " << MethodName(methods[m]) << " query "
              << r.query_id << ": " << r.error << "\n";
        }
      }
    }
    return kExitError;
  }
  return kExitOk;
}

int CmdServeCheck(const Options& o, std::ostream& out) {
  if (o.scorer.empty()) throw ConfigError("serve-check needs --scorer");
  if (o.data.empty()) throw ConfigError("--data <artifact dir> is required");
  const auto art = LoadArtifacts(o.data);
  const auto start = std::chrono::steady_clock::now();
  auto scorer = ConnectScorer(o.scorer, art.schema);
  out << "handshake: " << scorer->handshake().class_count << " classes, "
      << scorer->handshake().columns.size() << " columns\n";
  const std::size_t n = std::min<std::size_t>(o.probe_rows, art.test.size());
  const std::vector<Instance> probe(art.test.rows.begin(),
                                    art.test.rows.begin() +
                                        static_cast<std::ptrdiff_t>(n));
  ClassifierHandle handle(scorer);
  const auto probs = handle.PredictProbaMany(probe);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  std::size_t agree = 0;
  if (art.model) {
    const auto local = art.model->PredictProbaMany(probe);
    for (std::size_t i = 0; i < n; ++i) {
      if (ArgMax(local[i]) == ArgMax(probs[i])) ++agree;
    }
  }
  out << "scored " << n << " rows in " << secs << " s";
  if (art.model) out << "; agrees with local model on " << agree << "/" << n;
  out << "\nok\n";
  return kExitOk;
}

int CmdServe(const Options& o, std::ostream& out) {
  if (o.data.empty()) throw ConfigError("--data <artifact dir> is required");
  const auto art = LoadArtifacts(o.data);
  if (!art.model) throw ArtifactError("no model in " + o.data);
  if (o.stdio) {
    FdLineChannel channel(STDIN_FILENO, dup(STDOUT_FILENO));
    ServeClassifier(channel, *art.model, art.schema);
    return kExitOk;
  }
  TcpListener listener(static_cast<std::uint16_t>(o.port));
  out << "listening on tcp://127.0.0.1:" << listener.port() << std::endl;
  do {
    auto channel = listener.Accept();
    try {
      ServeClassifier(*channel, *art.model, art.schema);
    } catch (const TransportError&) {
    }
  } while (!o.once);
  return kExitOk;
}

int CmdTsExplain(const Options& o, std::ostream& out) {
  const auto config = ResolveConfig(o);
  if (o.data.empty() || o.labels.empty()) {
    throw ConfigError("ts-explain needs --data <series csv> and --labels <csv>");
  }
  const auto all = LoadSeries(o.data, o.labels);
  int classes = 0;
  for (const auto& s : all.samples) classes = std::max(classes, s.label + 1);
  SeriesDataset train{all.names, {}}, test{all.names, {}};
  std::vector<std::size_t> order(all.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(config.seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(
      config.train_fraction * static_cast<double>(all.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? train : test).samples.push_back(all.samples[order[i]]);
  }
  if (test.samples.empty()) throw ConfigError("no test samples");
  const auto model = SeriesCentroidModel::Fit(train, classes);
  const auto env = SeriesEnv::Build(train, model);
  const std::size_t row = o.row.value_or(0);
  if (row >= test.size()) throw ConfigError("--row out of range");
  const auto& x = test.samples[row];
  const int predicted = ArgMax(model->PredictProba(x.series));
  const int target = config.target.value_or((predicted + 1) % classes);
  const auto e = TsExplain(x, target, env, config, row);
  const auto text = SeriesExplanationToText(e, train);
  const fs::path dir = OutDir(o);
  fs::create_directories(dir);
  WriteTextFile(dir / ("series_report_row" + std::to_string(row) + ".txt"), text);
  out << text;
  return kExitOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Model-agnostic counterfactual explanations", "mace"};
  app.require_subcommand(1);
  Options o;

  auto add_config = [&](CLI::App* c) {
    c->add_option("--config", o.config, "JSON config file")
        ->check(CLI::ExistingFile);
    c->add_option("--seed", o.seed, "Random seed");
  };
  auto add_out = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Output directory (default $MACE_OUT_DIR)");
  };

  auto* synth = app.add_subcommand("synth-census", "Write the synthetic census data");
  add_out(synth);
  synth->add_option("--rows", o.rows, "Row count");
  synth->add_option("--seed", o.seed, "Random seed");

  auto* synth_ts = app.add_subcommand("synth-series", "Write synthetic series data");
  add_out(synth_ts);
  synth_ts->add_option("--seed", o.seed, "Random seed");

  auto* prepare = app.add_subcommand("prepare", "Split data and fit encoders");
  add_config(prepare);
  add_out(prepare);
  prepare->add_option("--data", o.data, "Data CSV")->required();
  prepare->add_option("--schema", o.schema, "Schema JSON")->required();

  auto* train = app.add_subcommand("train-model", "Train a demo classifier");
  add_config(train);
  train->add_option("--data", o.data, "Artifact directory")->required();
  train->add_option("--model", o.model, "logistic or stumps")
      ->check(CLI::IsMember({"logistic", "stumps"}));

  auto* explain = app.add_subcommand("explain", "Explain one query");
  add_config(explain);
  add_out(explain);
  explain->add_option("--data", o.data, "Artifact directory")->required();
  auto* row_opt = explain->add_option("--row", o.row, "Test row index");
  explain->add_option("--values", o.values, "Inline query: \"col=value,...\"")
      ->excludes(row_opt);
  explain->add_option("--target", o.target, "Target class index");
  explain->add_option("--what-if", o.what_if,
                      "Re-score the query with \"col=value,...\" applied");
  explain->add_option("--method", o.method,
                      "mace_rl, mace_gld or greedy_baseline");
  explain->add_option("--scorer", o.scorer,
                      "Remote scorer: tcp://host:port or exec:<command>");

  auto* evaluate = app.add_subcommand("evaluate", "Explain the test split");
  add_config(evaluate);
  add_out(evaluate);
  evaluate->add_option("--data", o.data, "Artifact directory")->required();
  evaluate->add_option("--methods", o.methods, "Comma-separated methods");
  evaluate->add_option("--workers", o.workers, "Worker threads");
  evaluate->add_option("--target", o.target, "Target class index");
  evaluate->add_option("--scorer", o.scorer, "Remote scorer address");

  auto* check = app.add_subcommand("serve-check", "Probe a remote scorer");
  check->add_option("--scorer", o.scorer, "Remote scorer address")->required();
  check->add_option("--data", o.data, "Artifact directory")->required();
  check->add_option("--rows", o.probe_rows, "Rows to score");

  auto* serve = app.add_subcommand("serve", "Serve the trained model");
  serve->add_option("--data", o.data, "Artifact directory")->required();
  serve->add_option("--port", o.port, "TCP port (0 picks one)");
  serve->add_flag("--stdio", o.stdio, "Serve on stdin/stdout");
  serve->add_flag("--once", o.once, "Exit after one connection");

  auto* ts = app.add_subcommand("ts-explain", "Explain a time-series sample");
  add_config(ts);
  add_out(ts);
  ts->add_option("--data", o.data, "Series CSV")->required();
  ts->add_option("--labels", o.labels, "Label CSV")->required();
  ts->add_option("--row", o.row, "Test sample index");
  ts->add_option("--target", o.target, "Desired class");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (synth->parsed()) return CmdSynthCensus(o, out);
    if (synth_ts->parsed()) return CmdSynthSeries(o, out);
    if (prepare->parsed()) return CmdPrepare(o, out);
    if (train->parsed()) return CmdTrainModel(o, out);
    if (explain->parsed()) return CmdExplain(o, out, err);
    if (evaluate->parsed()) return CmdEvaluate(o, out, err);
    if (check->parsed()) return CmdServeCheck(o, out);
    if (serve->parsed()) return CmdServe(o, out);
    if (ts->parsed()) return CmdTsExplain(o, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace mace::cli
