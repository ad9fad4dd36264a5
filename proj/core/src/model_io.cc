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

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mace/demo_models.h"
#include "mace/errors.h"

namespace mace {

using nlohmann::json;

void SaveModel(const std::filesystem::path& path, const Classifier& model) {
  json j;
  j["format"] = kModelFormat;
  j["kind"] = model.Kind();
  if (const auto* lr = dynamic_cast<const LogisticModel*>(&model)) {
    j["mins"] = lr->mins();
    j["maxs"] = lr->maxs();
    j["weights"] = lr->weights();
    j["bias"] = lr->bias();
  } else if (const auto* bs = dynamic_cast<const BoostedStumps*>(&model)) {
    j["base_score"] = bs->base_score();
    json stumps = json::array();
    for (const auto& s : bs->stumps()) {
      stumps.push_back({{"column", s.column},
                        {"categorical", s.categorical},
                        {"threshold", s.threshold},
                        {"category", s.category},
                        {"left", s.left},
                        {"right", s.right}});
    }
    j["stumps"] = std::move(stumps);
  } else {
    throw ArtifactError("cannot persist classifier of kind '" + model.Kind() +
                        "'");
  }
  std::ofstream out(path);
  if (!out) throw ArtifactError("cannot write " + path.string());
  out << j.dump() << '\n';
}

std::shared_ptr<Classifier> LoadModel(const std::filesystem::path& path,
                                      const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw ArtifactError("cannot open model file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    const auto j = json::parse(ss.str());
    if (j.at("format").get<std::string>() != kModelFormat) {
      throw ArtifactError("model format tag mismatch in " + path.string());
    }
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "logistic") {
      return std::make_shared<LogisticModel>(
          schema, j.at("mins").get<std::vector<double>>(),
          j.at("maxs").get<std::vector<double>>(),
          j.at("weights").get<std::vector<double>>(),
          j.at("bias").get<double>());
    }
    if (kind == "stumps") {
      std::vector<Stump> stumps;
      for (const auto& js : j.at("stumps")) {
        Stump s;
        s.column = js.at("column").get<std::size_t>();
        s.categorical = js.at("categorical").get<bool>();
        s.threshold = js.at("threshold").get<double>();
        s.category = js.at("category").get<int>();
        s.left = js.at("left").get<double>();
        s.right = js.at("right").get<double>();
        stumps.push_back(s);
      }
      return std::make_shared<BoostedStumps>(
          schema, j.at("base_score").get<double>(), std::move(stumps));
    }
    throw ArtifactError("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ArtifactError("corrupt model file " + path.string() + ": " +
                        e.what());
  } catch (const ConfigError& e) {
    throw ArtifactError("model file " + path.string() +
                        " does not match schema: " + e.what());
  }
}

}  // namespace mace
