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

#include "mace/timeseries.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "mace/errors.h"
#include "mace/pipeline.h"
#include "mace/selection.h"
#include "text_util.h"

namespace mace {

namespace {

using Series = std::vector<std::vector<double>>;

bool SameSeries(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (std::abs(a[t] - b[t]) > kSeriesTolerance) return false;
  }
  return true;
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Scores the query with the "swap" columns of an instance substituted.
class SubstitutionClassifier : public Classifier {
 public:
  SubstitutionClassifier(const Series& base,
                         std::shared_ptr<const SeriesClassifier> model,
                         const SeriesDataset& train,
                         const std::vector<SeriesCandidate>& columns)
      : base_(base), model_(std::move(model)), train_(train), columns_(columns) {}

  int ClassCount() const override { return model_->ClassCount(); }
  std::vector<double> PredictProba(const Instance& x) const override {
    return model_->PredictProba(Build(x));
  }
  std::string Kind() const override { return "series:" + model_->Kind(); }

  Series Build(const Instance& x) const {
    Series s = base_;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      if (x[j] != 0.0) {
        const auto& c = columns_[j];
        s[c.series] = train_.samples[c.donor].series[c.series];
      }
    }
    return s;
  }

 private:
  const Series& base_;
  std::shared_ptr<const SeriesClassifier> model_;
  const SeriesDataset& train_;
  const std::vector<SeriesCandidate>& columns_;
};

}  // namespace

void ValidateSeries(const SeriesDataset& data) {
  if (data.names.empty()) throw SchemaError("series data has no series");
  if (data.samples.empty()) throw SchemaError("series data has no samples");
  const auto& first = data.samples.front();
  for (const auto& s : data.samples) {
    if (s.series.size() != data.names.size()) {
      throw SchemaError("sample " + s.id + " lacks some series");
    }
    for (std::size_t i = 0; i < s.series.size(); ++i) {
      if (s.series[i].size() != first.series[i].size() || s.series[i].empty()) {
        throw SchemaError("sample " + s.id + ": series " + data.names[i] +
                          " has the wrong length");
      }
    }
  }
}

SeriesDataset ReadSeriesCsv(std::istream& series, std::istream& labels) {
  SeriesDataset d;
  std::map<std::string, std::size_t> sample_at;
  std::map<std::string, std::size_t> name_at;
  std::vector<std::map<std::size_t, std::vector<double>>> pending;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(series, line)) {
    ++line_no;
    if (line_no == 1 || text::Trim(line).empty()) continue;
    const auto f = text::SplitCsvLine(line);
    if (f.size() < 3) throw RowError(line_no, "expected id, name and values");
    auto [sit, new_sample] = sample_at.try_emplace(f[0], d.samples.size());
    if (new_sample) {
      d.samples.push_back({f[0], {}, 0});
      pending.emplace_back();
    }
    auto [nit, new_name] = name_at.try_emplace(f[1], d.names.size());
    if (new_name) d.names.push_back(f[1]);
    std::vector<double> values;
    for (std::size_t i = 2; i < f.size(); ++i) {
      const auto v = text::ParseNumber(f[i]);
      if (!v) throw RowError(line_no, "bad value \"" + f[i] + "\"");
      values.push_back(*v);
    }
    if (!pending[sit->second].emplace(nit->second, std::move(values)).second) {
      throw RowError(line_no, "duplicate series " + f[1] + " for " + f[0]);
    }
  }
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    for (std::size_t n = 0; n < d.names.size(); ++n) {
      auto it = pending[i].find(n);
      if (it == pending[i].end()) {
        throw SchemaError("sample " + d.samples[i].id + " lacks series " +
                          d.names[n]);
      }
      d.samples[i].series.push_back(std::move(it->second));
    }
  }

  std::vector<bool> labelled(d.samples.size(), false);
  line_no = 0;
  while (std::getline(labels, line)) {
    ++line_no;
    if (line_no == 1 || text::Trim(line).empty()) continue;
    const auto f = text::SplitCsvLine(line);
    if (f.size() != 2) throw RowError(line_no, "expected sample_id,label");
    auto it = sample_at.find(f[0]);
    if (it == sample_at.end()) throw RowError(line_no, "unknown sample " + f[0]);
    const auto v = text::ParseNumber(f[1]);
    if (!v || *v < 0 || *v != std::floor(*v)) {
      throw RowError(line_no, "bad label \"" + f[1] + "\"");
    }
    d.samples[it->second].label = static_cast<int>(*v);
    labelled[it->second] = true;
  }
  for (std::size_t i = 0; i < labelled.size(); ++i) {
    if (!labelled[i]) throw SchemaError("no label for " + d.samples[i].id);
  }
  ValidateSeries(d);
  return d;
}

SeriesDataset LoadSeries(const std::filesystem::path& series,
                         const std::filesystem::path& labels) {
  std::ifstream s(series), l(labels);
  if (!s) throw SchemaError("cannot open " + series.string());
  if (!l) throw SchemaError("cannot open " + labels.string());
  return ReadSeriesCsv(s, l);
}

void WriteSeriesCsv(std::ostream& series, std::ostream& labels,
                    const SeriesDataset& data) {
  std::size_t len = 0;
  for (const auto& s : data.samples) {
    for (const auto& v : s.series) len = std::max(len, v.size());
  }
  series << "sample_id,series_name";
  for (std::size_t t = 0; t < len; ++t) series << ",t" << t;
  series << "\n";
  labels << "sample_id,label\n";
  for (const auto& s : data.samples) {
    for (std::size_t n = 0; n < s.series.size(); ++n) {
      series << text::CsvEscape(s.id) << "," << text::CsvEscape(data.names[n]);
      for (double v : s.series[n]) series << "," << text::FormatNumber(v);
      series << "\n";
    }
    labels << text::CsvEscape(s.id) << "," << s.label << "\n";
  }
}

SeriesCentroidModel::SeriesCentroidModel(
    std::vector<std::vector<double>> centroids, double beta)
    : centroids_(std::move(centroids)), beta_(beta) {
  if (centroids_.size() < 2) throw ConfigError("need at least two classes");
}

std::shared_ptr<SeriesCentroidModel> SeriesCentroidModel::Fit(
    const SeriesDataset& data, int class_count, double beta) {
  ValidateSeries(data);
  const auto k = static_cast<std::size_t>(class_count);
  std::vector<std::vector<double>> sums(k,
                                        std::vector<double>(data.series_count()));
  std::vector<double> counts(k, 0.0);
  for (const auto& s : data.samples) {
    if (s.label < 0 || s.label >= class_count) {
      throw SchemaError("label out of range in sample " + s.id);
    }
    const auto c = static_cast<std::size_t>(s.label);
    counts[c] += 1.0;
    for (std::size_t n = 0; n < s.series.size(); ++n) {
      sums[c][n] += Mean(s.series[n]);
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) throw SchemaError("class without training samples");
    for (double& v : sums[c]) v /= counts[c];
  }
  return std::make_shared<SeriesCentroidModel>(std::move(sums), beta);
}

std::vector<double> SeriesCentroidModel::PredictProba(
    const Series& series) const {
  std::vector<double> logits(centroids_.size());
  for (std::size_t c = 0; c < centroids_.size(); ++c) {
    double d2 = 0.0;
    for (std::size_t n = 0; n < series.size(); ++n) {
      const double diff = Mean(series[n]) - centroids_[c][n];
      d2 += diff * diff;
    }
    logits[c] = -beta_ * d2;
  }
  return Softmax(logits);
}

SeriesScaler SeriesScaler::Fit(const SeriesDataset& data) {
  SeriesScaler s;
  const std::size_t n = data.series_count();
  s.mean.assign(n, 0.0);
  s.scale.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0, sq = 0.0, count = 0.0;
    for (const auto& sample : data.samples) {
      for (double v : sample.series[i]) {
        sum += v;
        sq += v * v;
        count += 1.0;
      }
    }
    if (count == 0) continue;
    s.mean[i] = sum / count;
    const double var = std::max(0.0, sq / count - s.mean[i] * s.mean[i]);
    s.scale[i] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return s;
}

double SeriesScaler::Distance(const Series& a, const Series& b) const {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double sq = 0.0;
    for (std::size_t t = 0; t < a[i].size(); ++t) {
      const double d = (a[i][t] - b[i][t]) / scale[i];
      sq += d * d;
    }
    total += std::sqrt(sq);
  }
  return total;
}

SeriesCandidates TsSelectCandidates(const SeriesSample& x, int target,
                                    const SeriesDataset& train,
                                    const std::vector<int>& predicted,
                                    const SeriesScaler& scaler, int neighbors,
                                    int max_series) {
  if (neighbors < 1 || max_series < 1) throw ConfigError("K and s must be >= 1");
  SeriesCandidates out;
  std::vector<std::pair<double, std::size_t>> group;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (predicted[i] == target) {
      group.emplace_back(scaler.Distance(x.series, train.samples[i].series), i);
    }
  }
  if (group.empty()) {
    throw TargetUnreachable("no training sample is predicted as class " +
                            std::to_string(target));
  }
  auto k = static_cast<std::size_t>(neighbors);
  if (k > group.size()) {
    out.warnings.push_back("K=" + std::to_string(k) + " capped at " +
                           std::to_string(group.size()) +
                           " target-class samples");
    k = group.size();
  }
  std::partial_sort(group.begin(), group.begin() + static_cast<std::ptrdiff_t>(k),
                    group.end());
  for (std::size_t i = 0; i < k; ++i) out.neighbors.push_back(group[i].second);

  for (std::size_t n = 0; n < train.series_count(); ++n) {
    SeriesCandidate c;
    c.series = n;
    bool have_donor = false;
    for (std::size_t row : out.neighbors) {
      if (SameSeries(train.samples[row].series[n], x.series[n])) continue;
      ++c.count;
      if (!have_donor) {
        c.donor = row;
        have_donor = true;
      }
    }
    if (c.count > 0) out.columns.push_back(c);
  }
  std::stable_sort(out.columns.begin(), out.columns.end(),
                   [](const SeriesCandidate& a, const SeriesCandidate& b) {
                     return a.count > b.count;
                   });
  if (out.columns.size() > static_cast<std::size_t>(max_series)) {
    out.columns.resize(static_cast<std::size_t>(max_series));
  }
  return out;
}

SeriesEnv SeriesEnv::Build(const SeriesDataset& train,
                           std::shared_ptr<const SeriesClassifier> model) {
  ValidateSeries(train);
  SeriesEnv env;
  env.train = &train;
  env.model = std::move(model);
  env.scaler = SeriesScaler::Fit(train);
  for (const auto& s : train.samples) {
    env.predicted.push_back(ArgMax(env.model->PredictProba(s.series)));
  }
  return env;
}

SeriesExplanation TsExplain(const SeriesSample& x, int target,
                            const SeriesEnv& env, const PipelineConfig& config,
                            std::uint64_t stream) {
  const auto& train = *env.train;
  const auto& model = *env.model;
  if (x.series.size() != train.series_count()) {
    throw SchemaError("query does not have the training series");
  }
  if (target < 0 || target >= model.ClassCount()) {
    throw ConfigError("target class out of range");
  }
  SeriesExplanation out;
  out.query_id = x.id;
  out.target = target;
  out.probabilities = model.PredictProba(x.series);
  out.predicted = ArgMax(out.probabilities);
  out.notes.push_back(
      "time-series adaptation: whole-series substitution from training "
      "samples");

  auto make = [&](Series s, std::vector<SeriesSubstitution> subs,
                  Provenance prov) {
    SeriesCounterfactual cf;
    const auto probs = model.PredictProba(s);
    cf.valid = IsTargetPredicted(probs, target);
    cf.target_probability = probs[static_cast<std::size_t>(target)];
    cf.series = std::move(s);
    cf.substitutions = std::move(subs);
    std::sort(cf.substitutions.begin(), cf.substitutions.end(),
              [](const auto& a, const auto& b) { return a.series < b.series; });
    cf.sparsity = 0;
    for (std::size_t n = 0; n < x.series.size(); ++n) {
      if (!SameSeries(cf.series[n], x.series[n])) ++cf.sparsity;
    }
    cf.proximity = -cf.sparsity;
    cf.provenance = prov;
    return cf;
  };

  if (IsTargetPredicted(out.probabilities, target)) {
    out.already_target = true;
    out.examples.push_back(make(x.series, {}, Provenance::kQuery));
    return out;
  }

  out.candidates = TsSelectCandidates(x, target, train, env.predicted,
                                      env.scaler, config.candidates.neighbors,
                                      config.candidates.max_columns);
  for (const auto& w : out.candidates.warnings) out.notes.push_back(w);
  const auto& cols = out.candidates.columns;

  if (!cols.empty()) {
    std::vector<ColumnSpec> specs;
    CandidateFeatures cand;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      specs.push_back({train.names[cols[j].series],
                       ColumnKind::kCategorical,
                       {"keep", "swap"},
                       true});
      CandidateColumn cc;
      cc.column = j;
      cc.count = cols[j].count;
      cc.values.push_back({1, 1.0, cols[j].count});
      cand.columns.push_back(std::move(cc));
    }
    Schema schema(std::move(specs));
    EncoderState enc(schema, std::vector<ContinuousEncoding>(schema.size()), {});
    auto adapter = std::make_shared<SubstitutionClassifier>(
        x.series, env.model, train, cols);
    ClassifierHandle handle(adapter);
    const Instance x_tab{std::vector<double>(cols.size(), 0.0)};
    const TargetSpec spec{out.predicted, target};

    auto rng = QueryRng(config.seed, stream);
    auto found = RlSearch(x_tab, spec, handle, cand, enc, config, rng);
    SortByProximity(found.selected);
    if (found.selected.size() > static_cast<std::size_t>(config.selection.top_n)) {
      found.selected.resize(static_cast<std::size_t>(config.selection.top_n));
    }
    for (const auto& e : found.selected) {
      std::vector<SeriesSubstitution> subs;
      for (std::size_t j : e.changed) {
        subs.push_back({cols[j].series, cols[j].donor});
      }
      out.examples.push_back(
          make(adapter->Build(e.instance), std::move(subs), e.provenance));
    }
  }

  if (out.examples.empty()) {
    const std::size_t donor = out.candidates.neighbors.front();
    std::vector<SeriesSubstitution> subs;
    for (std::size_t n = 0; n < x.series.size(); ++n) {
      if (!SameSeries(train.samples[donor].series[n], x.series[n])) {
        subs.push_back({n, donor});
      }
    }
    out.examples.push_back(make(train.samples[donor].series, std::move(subs),
                                Provenance::kFallbackNn));
    out.fallback = true;
    out.notes.push_back("no valid substitution found; nearest target sample");
  }
  return out;
}

std::string SeriesExplanationToText(const SeriesExplanation& e,
                                    const SeriesDataset& train) {
  std::ostringstream out;
  char buf[64];
  out << "query: " << e.query_id << "  predicted: " << e.predicted
      << "  target: " << e.target << "\n";
  for (std::size_t i = 0; i < e.examples.size(); ++i) {
    const auto& cf = e.examples[i];
    std::snprintf(buf, sizeof(buf), "%.3f", cf.target_probability);
    out << "counterfactual " << (i + 1) << " [" << ProvenanceName(cf.provenance)
        << (cf.valid ? ", valid" : ", INVALID") << ", sparsity " << cf.sparsity
        << ", p_target " << buf << "]\n";
    for (const auto& s : cf.substitutions) {
      out << "  " << train.names[s.series] << " <- sample "
          << train.samples[s.donor].id << "\n";
    }
  }
  for (const auto& n : e.notes) out << "note: " << n << "\n";
  return out.str();
}

SeriesDataset SyntheticSeries(int classes, int series, int length,
                              int samples_per_class, std::uint64_t seed) {
  if (classes < 2 || series < 2 * classes || length < 1 ||
      samples_per_class < 1) {
    throw ConfigError("need classes >= 2, series >= 2 * classes, length >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.1);
  SeriesDataset d;
  for (int n = 0; n < series; ++n) {
    char name[32];
    std::snprintf(name, sizeof(name), "series_%02d", n);
    d.names.emplace_back(name);
  }
  const auto len = static_cast<std::size_t>(length);
  int id = 0;
  for (int i = 0; i < samples_per_class; ++i) {
    for (int c = 0; c < classes; ++c) {
      SeriesSample s;
      s.id = "s" + std::to_string(id++);
      s.label = c;
      for (int n = 0; n < series; ++n) {
        std::vector<double> v(len);
        if (n < 2 * classes) {
          const double level = (n / 2 == c) ? 1.0 : 0.0;
          for (auto& x : v) x = level + noise(rng);
        } else {
          for (std::size_t t = 0; t < len; ++t) {
            v[t] = 0.5 + 0.1 * std::sin(static_cast<double>(t));
          }
        }
        s.series.push_back(std::move(v));
      }
      d.samples.push_back(std::move(s));
    }
  }
  return d;
}

}  // namespace mace
