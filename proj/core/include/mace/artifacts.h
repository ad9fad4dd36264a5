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

// On-disk layout of a prepared artifact directory:
//
//   manifest.json   format tag
//   schema.json
//   train.csv, test.csv
//   encoders.json
//   model.json      after train-model
//   index.json      predicted labels and encodings of the training rows
//
// Every JSON file carries the format tag; a mismatch refuses to load.

#ifndef MACE_ARTIFACTS_H_
#define MACE_ARTIFACTS_H_

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mace/classifier.h"
#include "mace/dataset.h"
#include "mace/encoders.h"
#include "mace/knn_index.h"

namespace mace {

inline constexpr const char* kArtifactFormat = "mace-artifacts/1";

std::string EncodersToJson(const EncoderState& enc);
// Throws ArtifactError on tag mismatch or corrupt input.
EncoderState EncodersFromJson(std::string_view text, const Schema& schema);

// Stores predictions and encodings; the instances are the training rows.
std::string IndexToJson(const ClassIndex& index);
ClassIndex IndexFromJson(std::string_view text,
                         std::vector<Instance> instances);

struct ArtifactSet {
  Schema schema;
  Dataset train;
  Dataset test;
  EncoderState enc;
  std::shared_ptr<Classifier> model;  // null before train-model
  ClassIndex index;                   // empty when model is null
  std::vector<std::string> warnings;
};

// Writes manifest, schema, splits and encoders.
void SavePrepared(const std::filesystem::path& dir, const Dataset& train,
                  const Dataset& test, const EncoderState& enc);
// Writes model.json and index.json.
void SaveModelArtifacts(const std::filesystem::path& dir,
                        const Classifier& model, const ClassIndex& index);

// Loads everything present. A missing index next to a model is rebuilt
// from the training rows, with a warning.
ArtifactSet LoadArtifacts(const std::filesystem::path& dir);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace mace

#endif  // MACE_ARTIFACTS_H_
