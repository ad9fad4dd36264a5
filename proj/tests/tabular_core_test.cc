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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mace/dataset.h"
#include "mace/encoders.h"
#include "mace/errors.h"
#include "mace/schema.h"
#include "mace/synthetic.h"

namespace mace {
namespace {

Schema TwoColumnSchema() {
  ColumnSpec color{"color", ColumnKind::kCategorical, {"red", "green", "blue"}};
  ColumnSpec size{"size", ColumnKind::kContinuous, {}};
  return Schema({color, size}, LabelSpec{"y", {"no", "yes"}});
}

Dataset OneContinuous(std::vector<double> values) {
  Dataset d;
  d.schema = Schema({ColumnSpec{"v", ColumnKind::kContinuous, {}}});
  for (double v : values) {
    d.rows.push_back(Instance{{v}});
    d.labels.push_back(0);
  }
  return d;
}

// Type-7 quantile, written out independently of the library.
double Quantile7(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double MedianOf(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

TEST(LoadDataset, ParsesRowsInHeaderOrder) {
  std::istringstream in("size,y,color\n1.5,no,red\n2,yes,blue\n-3e1,no,green\n");
  const auto d = ReadCsv(in, TwoColumnSchema());
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d.rows[0].values, (std::vector<double>{0, 1.5}));
  EXPECT_EQ(d.rows[1].values, (std::vector<double>{2, 2}));
  EXPECT_EQ(d.rows[2].values, (std::vector<double>{1, -30}));
  EXPECT_EQ(d.labels, (std::vector<int>{0, 1, 0}));
}

TEST(LoadDataset, UnknownCategoryNamesTheLine) {
  std::istringstream in("color,size,y\nZ,1,no\n");
  try {
    ReadCsv(in, TwoColumnSchema());
    FAIL() << "expected RowError";
  } catch (const RowError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("Z"), std::string::npos);
  }
}

TEST(LoadDataset, BadNumberNamesTheLine) {
  std::istringstream in("color,size,y\nred,1,no\nred,abc,yes\n");
  try {
    ReadCsv(in, TwoColumnSchema());
    FAIL() << "expected RowError";
  } catch (const RowError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadDataset, MissingColumnIsSchemaError) {
  std::istringstream in("color,y\nred,no\n");
  EXPECT_THROW(ReadCsv(in, TwoColumnSchema()), SchemaError);
}

TEST(LoadDataset, CsvRoundTrip) {
  const auto d = SyntheticCensus(50, 3);
  std::stringstream buf;
  WriteCsv(buf, d);
  const auto back = ReadCsv(buf, d.schema);
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(back.rows[i], d.rows[i]);
    EXPECT_EQ(back.labels[i], d.labels[i]);
  }
}

TEST(Schema, CensusColumnsInFeatureOrder) {
  const auto s = CensusSchema();
  const std::vector<std::string> expected{
      "Age", "Education", "Gender", "Working hours",
      "Marital", "Occupation", "Race", "Workclass"};
  ASSERT_EQ(s.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(s.column(i).name, expected[i]);
  }
}

TEST(Schema, JsonRoundTrip) {
  const auto s = CensusSchema();
  EXPECT_EQ(Schema::FromJson(s.ToJson()), s);
}

TEST(Schema, RejectsBadDefinitions) {
  ColumnSpec one{"a", ColumnKind::kCategorical, {"x"}};
  EXPECT_THROW(Schema({one}), SchemaError);
  ColumnSpec a{"a", ColumnKind::kContinuous, {}};
  EXPECT_THROW(Schema({a, a}), SchemaError);
  a.actionable = false;
  EXPECT_THROW(Schema({a}), SchemaError);
}

TEST(Schema, ApplyEditsByName) {
  const auto s = TwoColumnSchema();
  const auto x = ApplyEdits(s, Instance{{0, 1}}, "size=4.5, color=blue");
  EXPECT_EQ(x.values, (std::vector<double>{2, 4.5}));
  EXPECT_THROW(ApplyEdits(s, x, "color=purple"), Error);
  EXPECT_THROW(ApplyEdits(s, x, "weight=3"), Error);
}

TEST(SplitDataset, DeterministicAndComplete) {
  const auto d = SyntheticCensus(101, 5);
  const auto [a, b] = SplitDataset(d, 0.8, 9);
  const auto [a2, b2] = SplitDataset(d, 0.8, 9);
  EXPECT_EQ(a.size(), 81u);
  EXPECT_EQ(b.size(), 20u);
  EXPECT_EQ(a.rows, a2.rows);
  EXPECT_EQ(b.rows, b2.rows);
}

TEST(FitEncoders, QuartilesOfOneToHundred) {
  std::vector<double> values;
  for (int i = 1; i <= 100; ++i) values.push_back(i);
  const auto enc = FitEncoders(OneContinuous(values), 4);
  const auto& col = enc.column(0);
  ASSERT_EQ(col.bin_count(), 4u);
  EXPECT_DOUBLE_EQ(col.edges[1], Quantile7(values, 0.25));
  EXPECT_DOUBLE_EQ(col.edges[2], Quantile7(values, 0.50));
  EXPECT_DOUBLE_EQ(col.edges[3], Quantile7(values, 0.75));
  // Representatives: medians of the values each bin holds, by direct scan.
  for (std::size_t b = 0; b < 4; ++b) {
    std::vector<double> members;
    for (double v : values) {
      const bool last = b == 3;
      if (v >= col.edges[b] && (v < col.edges[b + 1] || (last && v <= col.edges[b + 1]))) {
        members.push_back(v);
      }
    }
    EXPECT_DOUBLE_EQ(col.representatives[b], MedianOf(members)) << "bin " << b;
  }
  EXPECT_DOUBLE_EQ(col.representatives[0], 13.0);
  EXPECT_DOUBLE_EQ(col.representatives[3], 88.0);
}

TEST(FitEncoders, ConstantColumnIsOneFlaggedBin) {
  const auto enc = FitEncoders(OneContinuous({5, 5, 5, 5}), 10);
  EXPECT_TRUE(enc.column(0).constant);
  EXPECT_EQ(enc.column(0).bin_count(), 1u);
  EXPECT_DOUBLE_EQ(enc.column(0).representatives[0], 5.0);
  EXPECT_EQ(enc.warnings().size(), 1u);
}

TEST(FitEncoders, OddLengthMedian) {
  const auto enc = FitEncoders(OneContinuous({3, 1, 2}), 2);
  EXPECT_DOUBLE_EQ(enc.column(0).median, 2.0);
}

TEST(FitEncoders, DuplicateCutsMerge) {
  const auto enc = FitEncoders(OneContinuous({1, 1, 1, 1, 1, 1, 1, 2, 3, 4}), 10);
  const auto& e = enc.column(0).edges;
  EXPECT_LT(enc.column(0).bin_count(), 10u);
  for (std::size_t i = 1; i < e.size(); ++i) EXPECT_LT(e[i - 1], e[i]);
}

TEST(FitEncoders, RejectsBadInput) {
  EXPECT_THROW(FitEncoders(OneContinuous({1, 2}), 1), ConfigError);
  EXPECT_THROW(FitEncoders(OneContinuous({}), 4), SchemaError);
}

TEST(EncodeForKnn, OneHotPlusBinIndex) {
  Dataset d;
  d.schema = TwoColumnSchema();
  for (int i = 0; i < 4; ++i) {
    d.rows.push_back(Instance{{static_cast<double>(i % 3), i < 2 ? 0.0 : 10.0}});
    d.labels.push_back(0);
  }
  const auto enc = FitEncoders(d, 2);
  ASSERT_EQ(enc.column(1).bin_count(), 2u);
  EXPECT_EQ(enc.EncodeForKnn(Instance{{1, 10}}),
            (std::vector<double>{0, 1, 0, 1}));
  EXPECT_EQ(enc.KnnWidth(), 4u);
}

TEST(Normalize, AffineClipAndInverse) {
  const auto enc = FitEncoders(OneContinuous({0, 2, 10}), 2);
  EXPECT_DOUBLE_EQ(enc.NormalizeValue(0, 5), 0.5);
  EXPECT_DOUBLE_EQ(enc.NormalizeValue(0, 12), 1.0);
  EXPECT_DOUBLE_EQ(enc.NormalizeValue(0, -1), 0.0);
  EXPECT_NEAR(enc.DenormalizeValue(0, enc.NormalizeValue(0, 3.7)), 3.7, 1e-9);
}

TEST(ProximityScale, ZeroMedianIsFloored) {
  const auto enc = FitEncoders(OneContinuous({-1, 0, 0, 0, 1}), 2);
  bool floored = false;
  EXPECT_DOUBLE_EQ(enc.ProximityScale(0, &floored), EncoderState::kMedianFloor);
  EXPECT_TRUE(floored);
}

// Random data with ties, several bin counts.
class EncoderProperties : public ::testing::TestWithParam<int> {};

TEST_P(EncoderProperties, InvariantsHold) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()));
  std::normal_distribution<double> normal(3.0, 7.0);
  std::uniform_int_distribution<int> small(0, 6);
  const auto census = SyntheticCensus(300, static_cast<std::uint64_t>(GetParam()));
  Dataset d = census;
  for (auto& r : d.rows) r[0] = (GetParam() % 2) ? normal(rng) : small(rng);
  const int k = 2 + GetParam() % 12;
  const auto enc = FitEncoders(d, k);
  const auto& s = d.schema;

  for (std::size_t c : s.ContinuousColumns()) {
    const auto& col = enc.column(c);
    ASSERT_LE(col.bin_count(), static_cast<std::size_t>(k));
    // The top bin may hold only the maximum, so the last edge can repeat.
    for (std::size_t i = 1; i + 1 < col.edges.size(); ++i) {
      EXPECT_LT(col.edges[i - 1], col.edges[i]);
    }
    EXPECT_LE(col.edges[col.edges.size() - 2], col.edges.back());
    for (std::size_t b = 0; b < col.bin_count(); ++b) {
      EXPECT_GE(col.representatives[b], col.edges[b]);
      EXPECT_LE(col.representatives[b], col.edges[b + 1]);
    }
    EXPECT_LE(col.min, col.median);
    EXPECT_LE(col.median, col.max);

    std::vector<double> vals;
    for (const auto& r : d.rows) vals.push_back(r[c]);
    std::sort(vals.begin(), vals.end());
    for (std::size_t i = 1; i < vals.size(); ++i) {
      EXPECT_LE(col.BinOf(vals[i - 1]), col.BinOf(vals[i]));
    }
    for (double v : vals) {
      EXPECT_NEAR(enc.DenormalizeValue(c, enc.NormalizeValue(c, v)), v, 1e-9);
    }
  }

  const std::size_t width = s.CategoricalWidth() + s.ContinuousColumns().size();
  for (const auto& r : d.rows) {
    const auto v = enc.EncodeForKnn(r);
    ASSERT_EQ(v.size(), width);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, EncoderProperties, ::testing::Range(1, 13));

}  // namespace
}  // namespace mace
