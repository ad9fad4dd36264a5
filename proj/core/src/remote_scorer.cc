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

#include "mace/remote_scorer.h"

#include <map>

#include "json.hpp"
#include "mace/errors.h"

namespace mace {

using nlohmann::json;

namespace {

// Requests in flight per pipelined window; keeps both socket buffers from
// filling up while we are still writing.
constexpr std::size_t kWindow = 64;

json ParseJson(std::string_view line, const char* what) {
  try {
    return json::parse(line);
  } catch (const json::exception&) {
    throw ProtocolError(std::string("malformed ") + what + ": '" +
                        std::string(line.substr(0, 120)) + "'");
  }
}

}  // namespace

std::string EncodeHandshake(const ScorerHandshake& h) {
  return json{{"class_count", h.class_count}, {"columns", h.columns}}.dump();
}

ScorerHandshake DecodeHandshake(std::string_view line) {
  const auto j = ParseJson(line, "handshake");
  try {
    ScorerHandshake h;
    h.class_count = j.at("class_count").get<int>();
    h.columns = j.at("columns").get<std::vector<std::string>>();
    return h;
  } catch (const json::exception&) {
    throw ProtocolError("handshake lacks class_count/columns");
  }
}

std::string EncodeRequest(const Schema& schema, std::int64_t id,
                          const Instance& x) {
  json features = json::array();
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (schema.is_categorical(c)) {
      features.push_back(FormatValue(schema, c, x[c]));
    } else {
      features.push_back(x[c]);
    }
  }
  return json{{"id", id}, {"features", std::move(features)}}.dump();
}

Instance DecodeRequest(const Schema& schema, std::string_view line,
                       std::int64_t* id) {
  const auto j = ParseJson(line, "request");
  try {
    *id = j.at("id").get<std::int64_t>();
    const auto& f = j.at("features");
    if (!f.is_array() || f.size() != schema.size()) {
      throw ProtocolError("request has wrong feature count");
    }
    Instance x;
    x.values.resize(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (schema.is_categorical(c)) {
        const auto idx = schema.CategoryIndex(c, f[c].get<std::string>());
        if (!idx) throw ProtocolError("request has unknown category");
        x[c] = *idx;
      } else {
        x[c] = f[c].get<double>();
      }
    }
    return x;
  } catch (const json::exception&) {
    throw ProtocolError("request fields have wrong types");
  }
}

std::string EncodeResponse(std::int64_t id, const std::vector<double>& probs) {
  return json{{"id", id}, {"probs", probs}}.dump();
}

RemoteScorer::RemoteScorer(std::unique_ptr<LineChannel> channel, Schema schema,
                           std::chrono::milliseconds timeout)
    : schema_(std::move(schema)), timeout_(timeout), channel_(std::move(channel)) {
  handshake_ = DecodeHandshake(channel_->ReadLine(timeout_));
  if (handshake_.class_count < 2) {
    throw ProtocolError("scorer declares fewer than 2 classes");
  }
  std::vector<std::string> names;
  for (const auto& c : schema_.columns()) names.push_back(c.name);
  if (handshake_.columns != names) {
    throw ProtocolError("scorer columns do not match the schema");
  }
}

std::vector<double> RemoteScorer::ParseResponse(const std::string& line,
                                                std::int64_t* id) const {
  const auto j = ParseJson(line, "response");
  std::vector<double> probs;
  try {
    *id = j.at("id").get<std::int64_t>();
    probs = j.at("probs").get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ProtocolError("response lacks id/probs");
  }
  return probs;
}

std::vector<double> RemoteScorer::PredictProba(const Instance& x) const {
  std::lock_guard<std::mutex> lock(mu_);
  const std::int64_t id = next_id_++;
  channel_->WriteLine(EncodeRequest(schema_, id, x));
  while (true) {
    std::string line;
    try {
      line = channel_->ReadLine(timeout_);
    } catch (const TransportError&) {
      abandoned_.insert(id);
      throw;
    }
    std::int64_t got = 0;
    auto probs = ParseResponse(line, &got);
    if (got == id) {
      if (auto err = CheckProbabilities(probs, handshake_.class_count);
          !err.empty()) {
        throw ProtocolError("response " + std::to_string(id) + ": " + err);
      }
      return probs;
    }
    if (abandoned_.erase(got) == 0) {
      throw ProtocolError("response id " + std::to_string(got) +
                          " does not match request " + std::to_string(id));
    }
  }
}

std::vector<std::vector<double>> RemoteScorer::PredictProbaMany(
    std::span<const Instance> xs) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::vector<double>> out(xs.size());
  for (std::size_t start = 0; start < xs.size(); start += kWindow) {
    const std::size_t end = std::min(xs.size(), start + kWindow);
    std::map<std::int64_t, std::size_t> pending;
    for (std::size_t i = start; i < end; ++i) {
      const std::int64_t id = next_id_++;
      pending[id] = i;
      channel_->WriteLine(EncodeRequest(schema_, id, xs[i]));
    }
    while (!pending.empty()) {
      std::string line;
      try {
        line = channel_->ReadLine(timeout_);
      } catch (const TransportError&) {
        for (const auto& [id, _] : pending) abandoned_.insert(id);
        throw;
      }
      std::int64_t got = 0;
      auto probs = ParseResponse(line, &got);
      auto it = pending.find(got);
      if (it == pending.end()) {
        if (abandoned_.erase(got) == 0) {
          throw ProtocolError("response id " + std::to_string(got) +
                              " matches no pending request");
        }
        continue;
      }
      if (auto err = CheckProbabilities(probs, handshake_.class_count);
          !err.empty()) {
        throw ProtocolError("response " + std::to_string(got) + ": " + err);
      }
      out[it->second] = std::move(probs);
      pending.erase(it);
    }
  }
  return out;
}

std::shared_ptr<RemoteScorer> ConnectScorer(const std::string& address,
                                            const Schema& schema,
                                            std::chrono::milliseconds timeout) {
  return std::make_shared<RemoteScorer>(OpenChannel(address), schema, timeout);
}

std::size_t ServeClassifier(LineChannel& channel, const Classifier& model,
                            const Schema& schema) {
  ScorerHandshake h;
  h.class_count = model.ClassCount();
  for (const auto& c : schema.columns()) h.columns.push_back(c.name);
  channel.WriteLine(EncodeHandshake(h));
  std::size_t served = 0;
  while (true) {
    std::string line;
    try {
      line = channel.ReadLine(std::chrono::hours(24));
    } catch (const TransportError&) {
      return served;  // peer closed
    }
    if (line.empty()) continue;
    std::int64_t id = 0;
    const auto x = DecodeRequest(schema, line, &id);
    channel.WriteLine(EncodeResponse(id, model.PredictProba(x)));
    ++served;
  }
}

}  // namespace mace
