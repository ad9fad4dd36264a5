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

#include "mace/artifacts.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mace/demo_models.h"
#include "mace/errors.h"

namespace mace {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json ParseTagged(std::string_view text, const std::string& what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ArtifactError("corrupt " + what + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("format") ||
      j["format"] != kArtifactFormat) {
    throw ArtifactError(what + ": format tag mismatch (expected " +
                        std::string(kArtifactFormat) + ")");
  }
  return j;
}

}  // namespace

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArtifactError("cannot write " + path.string());
  out << text;
  if (!out) throw ArtifactError("write failed for " + path.string());
}

std::string EncodersToJson(const EncoderState& enc) {
  json j;
  j["format"] = kArtifactFormat;
  json cols = json::array();
  const auto& schema = enc.schema();
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (schema.is_categorical(c)) {
      cols.push_back(nullptr);
      continue;
    }
    const auto& e = enc.column(c);
    cols.push_back({{"edges", e.edges},
                    {"representatives", e.representatives},
                    {"min", e.min},
                    {"max", e.max},
                    {"median", e.median},
                    {"constant", e.constant}});
  }
  j["columns"] = std::move(cols);
  j["warnings"] = enc.warnings();
  return j.dump() + "\n";
}

EncoderState EncodersFromJson(std::string_view text, const Schema& schema) {
  const auto j = ParseTagged(text, "encoders");
  try {
    const auto& cols = j.at("columns");
    if (cols.size() != schema.size()) {
      throw ArtifactError("encoders do not match the schema width");
    }
    std::vector<ContinuousEncoding> continuous(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (schema.is_categorical(c) != cols[c].is_null()) {
        throw ArtifactError("encoders do not match column kinds");
      }
      if (cols[c].is_null()) continue;
      auto& e = continuous[c];
      e.edges = cols[c].at("edges").get<std::vector<double>>();
      e.representatives =
          cols[c].at("representatives").get<std::vector<double>>();
      e.min = cols[c].at("min").get<double>();
      e.max = cols[c].at("max").get<double>();
      e.median = cols[c].at("median").get<double>();
      e.constant = cols[c].at("constant").get<bool>();
      if (e.edges.size() != e.representatives.size() + 1) {
        throw ArtifactError("encoders: edge count mismatch");
      }
    }
    return EncoderState(schema, std::move(continuous),
                        j.at("warnings").get<std::vector<std::string>>());
  } catch (const json::exception& e) {
    throw ArtifactError(std::string("corrupt encoders: ") + e.what());
  }
}

std::string IndexToJson(const ClassIndex& index) {
  json j;
  j["format"] = kArtifactFormat;
  j["class_count"] = index.class_count();
  j["columns"] = index.columns();
  j["width"] = index.width();
  j["predicted"] = index.predictions();
  j["encoded"] = index.encoded_matrix();
  return j.dump() + "\n";
}

ClassIndex IndexFromJson(std::string_view text,
                         std::vector<Instance> instances) {
  const auto j = ParseTagged(text, "index");
  try {
    auto predicted = j.at("predicted").get<std::vector<int>>();
    auto encoded = j.at("encoded").get<std::vector<double>>();
    const auto width = j.at("width").get<std::size_t>();
    if (predicted.size() != instances.size() ||
        encoded.size() != width * instances.size()) {
      throw ArtifactError("index does not match the training rows");
    }
    return ClassIndex::FromParts(
        std::move(instances), std::move(predicted), std::move(encoded), width,
        j.at("columns").get<std::vector<std::size_t>>(),
        j.at("class_count").get<int>());
  } catch (const json::exception& e) {
    throw ArtifactError(std::string("corrupt index: ") + e.what());
  }
}

void SavePrepared(const fs::path& dir, const Dataset& train,
                  const Dataset& test, const EncoderState& enc) {
  fs::create_directories(dir);
  json manifest;
  manifest["format"] = kArtifactFormat;
  manifest["train_rows"] = train.size();
  manifest["test_rows"] = test.size();
  WriteTextFile(dir / "manifest.json", manifest.dump(2) + "\n");
  WriteTextFile(dir / "schema.json", train.schema.ToJson());
  SaveDataset(dir / "train.csv", train);
  SaveDataset(dir / "test.csv", test);
  WriteTextFile(dir / "encoders.json", EncodersToJson(enc));
}

void SaveModelArtifacts(const fs::path& dir, const Classifier& model,
                        const ClassIndex& index) {
  SaveModel(dir / "model.json", model);
  WriteTextFile(dir / "index.json", IndexToJson(index));
}

ArtifactSet LoadArtifacts(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw ArtifactError("no artifact directory at " + dir.string());
  }
  ParseTagged(ReadTextFile(dir / "manifest.json"), "manifest");
  ArtifactSet a;
  a.schema = Schema::FromFile(dir / "schema.json");
  a.train = LoadDataset(dir / "train.csv", a.schema);
  a.test = LoadDataset(dir / "test.csv", a.schema);
  a.enc = EncodersFromJson(ReadTextFile(dir / "encoders.json"), a.schema);
  if (!fs::exists(dir / "model.json")) return a;

  a.model = LoadModel(dir / "model.json", a.schema);
  if (fs::exists(dir / "index.json")) {
    a.index = IndexFromJson(ReadTextFile(dir / "index.json"), a.train.rows);
  } else {
    a.warnings.push_back("index.json missing; rebuilt from train.csv");
    a.index = ClassIndex::Build(a.train, ClassifierHandle(a.model), a.enc);
  }
  return a;
}

}  // namespace mace
