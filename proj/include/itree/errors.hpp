/*
 * Copyright 2026 The itree Authors.
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

#ifndef ITREE_ERRORS_HPP_
#define ITREE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace itree {

// Invalid arguments, unknown options, or a request that exceeds an engine cap.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exact engine was asked to enumerate more players than it supports.
class CapacityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Failure inside a value model (crash, timeout, protocol violation). The mask
// that was being scored is kept as a 0/1 string in position order when known.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& message, std::string mask = {})
      : std::runtime_error(mask.empty() ? message
                                        : message + " (mask " + mask + ")"),
        mask_(std::move(mask)) {}

  const std::string& mask() const { return mask_; }

 private:
  std::string mask_;
};

// Transport or protocol failure talking to an external model peer.
class BridgeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A serialized artifact does not match the expected schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace itree

#endif  // ITREE_ERRORS_HPP_
