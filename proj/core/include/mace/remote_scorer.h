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

// External scorer protocol: newline-delimited JSON over a byte stream.
//
//   scorer -> client (once):  {"class_count": n, "columns": ["a", "b", ...]}
//   client -> scorer:         {"id": 7, "features": ["Married", 40.0, ...]}
//   scorer -> client:         {"id": 7, "probs": [0.25, 0.75]}
//
// Categorical features travel as their category string, continuous ones as
// numbers. Every request gets exactly one response echoing its id. Responses
// are validated, never repaired: a wrong length, a negative entry or a sum
// off by more than 1e-6 is a ProtocolError.

#ifndef MACE_REMOTE_SCORER_H_
#define MACE_REMOTE_SCORER_H_

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mace/classifier.h"
#include "mace/schema.h"

namespace mace {

class LineChannel {
 public:
  virtual ~LineChannel() = default;
  // Writes `line` followed by '\n'. Throws TransportError.
  virtual void WriteLine(std::string_view line) = 0;
  // Next line without its terminator. Throws TransportError on timeout or
  // end of stream.
  virtual std::string ReadLine(std::chrono::milliseconds timeout) = 0;
};

// Channel over POSIX descriptors (a socket, or a pipe pair to a child
// process). Owns and closes the descriptors; reaps the child if any.
class FdLineChannel : public LineChannel {
 public:
  FdLineChannel(int read_fd, int write_fd, pid_t child = -1);
  ~FdLineChannel() override;
  FdLineChannel(const FdLineChannel&) = delete;
  FdLineChannel& operator=(const FdLineChannel&) = delete;

  void WriteLine(std::string_view line) override;
  std::string ReadLine(std::chrono::milliseconds timeout) override;

 private:
  int read_fd_;
  int write_fd_;
  pid_t child_;
  std::string buffer_;
};

// Connected in-process pair (socketpair), for test doubles and threads.
std::pair<std::unique_ptr<LineChannel>, std::unique_ptr<LineChannel>>
MakeChannelPair();

std::unique_ptr<LineChannel> ConnectTcp(const std::string& host,
                                        std::uint16_t port);
// Runs `command` through /bin/sh with stdin/stdout attached to the channel.
std::unique_ptr<LineChannel> SpawnProcess(const std::string& command);

// "tcp://host:port" or "exec:<shell command>".
std::unique_ptr<LineChannel> OpenChannel(const std::string& address);

// Listening TCP socket on 127.0.0.1; port 0 picks a free port.
class TcpListener {
 public:
  explicit TcpListener(std::uint16_t port = 0);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const { return port_; }
  std::unique_ptr<LineChannel> Accept();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

struct ScorerHandshake {
  int class_count = 0;
  std::vector<std::string> columns;
};

inline constexpr std::chrono::milliseconds kDefaultScorerTimeout{5000};

// Classifier backed by an external scorer. Requests on one connection are
// serialized; a pipelined batch path matches out-of-order responses by id.
class RemoteScorer : public Classifier {
 public:
  // Reads and checks the handshake: class_count >= 2 and column names equal
  // to the schema's, in order.
  RemoteScorer(std::unique_ptr<LineChannel> channel, Schema schema,
               std::chrono::milliseconds timeout = kDefaultScorerTimeout);

  int ClassCount() const override { return handshake_.class_count; }
  std::vector<double> PredictProba(const Instance& x) const override;
  std::vector<std::vector<double>> PredictProbaMany(
      std::span<const Instance> xs) const override;
  std::string Kind() const override { return "remote"; }

  const ScorerHandshake& handshake() const { return handshake_; }

 private:
  std::vector<double> ParseResponse(const std::string& line,
                                    std::int64_t* id) const;

  Schema schema_;
  std::chrono::milliseconds timeout_;
  ScorerHandshake handshake_;
  mutable std::mutex mu_;
  mutable std::unique_ptr<LineChannel> channel_;
  mutable std::int64_t next_id_ = 1;
  // Ids whose caller gave up (timeout); their late responses are skipped.
  mutable std::set<std::int64_t> abandoned_;
};

std::shared_ptr<RemoteScorer> ConnectScorer(
    const std::string& address, const Schema& schema,
    std::chrono::milliseconds timeout = kDefaultScorerTimeout);

std::string EncodeHandshake(const ScorerHandshake& h);
ScorerHandshake DecodeHandshake(std::string_view line);
std::string EncodeRequest(const Schema& schema, std::int64_t id,
                          const Instance& x);
// Inverse of EncodeRequest; throws ProtocolError.
Instance DecodeRequest(const Schema& schema, std::string_view line,
                       std::int64_t* id);
std::string EncodeResponse(std::int64_t id, const std::vector<double>& probs);

// Scorer side: sends the handshake, then answers requests until the peer
// closes the stream. Returns the number of requests served.
std::size_t ServeClassifier(LineChannel& channel, const Classifier& model,
                            const Schema& schema);

}  // namespace mace

#endif  // MACE_REMOTE_SCORER_H_
