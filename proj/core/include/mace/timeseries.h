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

// Counterfactuals for multivariate time series by whole-series substitution.
//
// Each named series is one atomic feature. A counterfactual replaces some
// series of the query with the same-named series of a training sample,
// copied verbatim. The search reuses the tabular policy machinery: every
// candidate series becomes a two-valued categorical column ("keep",
// "swap") of a derived schema, scored through an adapter classifier.
// This is an adaptation of the tabular method, and reports say so.

#ifndef MACE_TIMESERIES_H_
#define MACE_TIMESERIES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "mace/cf_example.h"
#include "mace/config.h"
#include "mace/reinforce.h"

namespace mace {

struct SeriesSample {
  std::string id;
  std::vector<std::vector<double>> series;  // by series position
  int label = 0;
};

struct SeriesDataset {
  std::vector<std::string> names;
  std::vector<SeriesSample> samples;

  std::size_t series_count() const { return names.size(); }
  std::size_t size() const { return samples.size(); }
};

// Throws SchemaError unless every sample has every series with the same
// per-series length.
void ValidateSeries(const SeriesDataset& data);

// Wide rows "sample_id,series_name,t0,t1,..." and labels "sample_id,label".
// Series names are taken in order of first appearance.
SeriesDataset ReadSeriesCsv(std::istream& series, std::istream& labels);
SeriesDataset LoadSeries(const std::filesystem::path& series,
                         const std::filesystem::path& labels);
void WriteSeriesCsv(std::ostream& series, std::ostream& labels,
                    const SeriesDataset& data);

class SeriesClassifier {
 public:
  virtual ~SeriesClassifier() = default;
  virtual int ClassCount() const = 0;
  virtual std::vector<double> PredictProba(
      const std::vector<std::vector<double>>& series) const = 0;
  virtual std::string Kind() const = 0;
};

// softmax(-beta * ||m(x) - centroid_c||^2), where m(x) holds each series'
// mean and centroid_c averages m over the training samples of class c.
class SeriesCentroidModel : public SeriesClassifier {
 public:
  SeriesCentroidModel(std::vector<std::vector<double>> centroids, double beta);
  static std::shared_ptr<SeriesCentroidModel> Fit(const SeriesDataset& data,
                                                  int class_count,
                                                  double beta = 4.0);

  int ClassCount() const override {
    return static_cast<int>(centroids_.size());
  }
  std::vector<double> PredictProba(
      const std::vector<std::vector<double>>& series) const override;
  std::string Kind() const override { return "series-centroid"; }

 private:
  std::vector<std::vector<double>> centroids_;
  double beta_;
};

// Per series name: mean and standard deviation over all training values,
// used to z-normalize before distances. Zero spread is treated as one.
struct SeriesScaler {
  std::vector<double> mean;
  std::vector<double> scale;

  static SeriesScaler Fit(const SeriesDataset& data);
  // Sum over series of the Euclidean distance of the z-normalized values.
  double Distance(const std::vector<std::vector<double>>& a,
                  const std::vector<std::vector<double>>& b) const;
};

inline constexpr double kSeriesTolerance = 1e-6;

struct SeriesCandidate {
  std::size_t series = 0;  // position in names
  int count = 0;           // neighbours whose series differs from the query
  std::size_t donor = 0;   // training sample supplying the replacement
};

struct SeriesCandidates {
  std::vector<SeriesCandidate> columns;  // descending count, ties by position
  std::vector<std::size_t> neighbors;    // training samples, nearest first
  std::vector<std::string> warnings;
};

// Training samples predicted as `target` by `model`, nearest first.
// K larger than that group is capped with a warning.
SeriesCandidates TsSelectCandidates(const SeriesSample& x, int target,
                                    const SeriesDataset& train,
                                    const std::vector<int>& predicted,
                                    const SeriesScaler& scaler, int neighbors,
                                    int max_series);

struct SeriesSubstitution {
  std::size_t series = 0;
  std::size_t donor = 0;  // training sample index
};

struct SeriesCounterfactual {
  std::vector<SeriesSubstitution> substitutions;  // ascending series
  std::vector<std::vector<double>> series;
  bool valid = false;
  double target_probability = 0.0;
  int sparsity = 0;
  double proximity = 0.0;  // minus the number of substituted series
  Provenance provenance = Provenance::kRlSample;
};

struct SeriesExplanation {
  std::string query_id;
  std::vector<double> probabilities;
  int predicted = 0;
  int target = 0;
  SeriesCandidates candidates;
  std::vector<SeriesCounterfactual> examples;  // best first
  bool already_target = false;
  bool fallback = false;
  std::vector<std::string> notes;
};

// Read-only state for series explanations.
struct SeriesEnv {
  const SeriesDataset* train = nullptr;
  std::shared_ptr<const SeriesClassifier> model;
  std::vector<int> predicted;  // model's class for each training sample
  SeriesScaler scaler;

  static SeriesEnv Build(const SeriesDataset& train,
                         std::shared_ptr<const SeriesClassifier> model);
};

// Validity is a strict argmax of `target`. Uses config.candidates (K, s),
// config.rl and config.selection; fine-tuning does not apply.
SeriesExplanation TsExplain(const SeriesSample& x, int target,
                            const SeriesEnv& env, const PipelineConfig& config,
                            std::uint64_t stream = 0);

std::string SeriesExplanationToText(const SeriesExplanation& e,
                                    const SeriesDataset& train);

// `classes` classes over `series` named series of `length` points. Class c
// raises the level of series 2c and 2c+1; the rest are constant, so any
// class is reachable from any other by three substitutions.
SeriesDataset SyntheticSeries(int classes, int series, int length,
                              int samples_per_class, std::uint64_t seed);

}  // namespace mace

#endif  // MACE_TIMESERIES_H_
