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

#ifndef MACE_ERRORS_H_
#define MACE_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mace {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Schema definition is inconsistent, or a file does not match it.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A data row could not be parsed. `line` is 1-based and counts the header.
class RowError : public Error {
 public:
  RowError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Failure talking to an external scorer: timeout, closed stream, bad bytes.
class TransportError : public Error {
 public:
  using Error::Error;
};

// A scorer answered, but the answer violates the protocol contract.
class ProtocolError : public TransportError {
 public:
  using TransportError::TransportError;
};

// The requested target class has no predicted members in the training data.
class TargetUnreachable : public Error {
 public:
  using Error::Error;
};

class ArtifactError : public Error {
 public:
  using Error::Error;
};

// Operation refused because its input is outside the supported envelope
// (non-binary labels for a binary learner, oversized enumeration, ...).
class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace mace

#endif  // MACE_ERRORS_H_
