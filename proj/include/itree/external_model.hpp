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

#ifndef ITREE_EXTERNAL_MODEL_HPP_
#define ITREE_EXTERNAL_MODEL_HPP_

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "itree/player_set.hpp"
#include "itree/value_model.hpp"

namespace itree {

// A bidirectional line channel to a model peer.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void write_line(const std::string& line) = 0;
  // Throws BridgeError on timeout or when the peer closes the stream.
  virtual std::string read_line(std::chrono::milliseconds timeout) = 0;
};

// Launches `command` through /bin/sh and talks over its stdin/stdout.
std::unique_ptr<LineChannel> spawn_subprocess(const std::string& command);
// Connects to "host:port".
std::unique_ptr<LineChannel> connect_tcp(const std::string& address);

struct ExternalModelOptions {
  // "tcp:host:port", "host:port", or a shell command (optionally "cmd:...").
  std::string endpoint;
  std::size_t pool_size = 1;
  std::chrono::milliseconds timeout{10000};
  // When set, the handshake must report this many players.
  std::optional<std::size_t> expected_players;
};

// ValueModel backed by a peer speaking the line-delimited JSON protocol:
//   {"op":"hello","version":1}            -> {"op":"hello","n":..,"baseline_score":..}
//   {"op":"score","id":..,"mask":"0101"}  -> {"op":"score","id":..,"score":..}
//   {"op":"score_batch","ids":[..],"masks":[..]}
//                                         -> {"op":"score_batch","ids":[..],"scores":[..]}
//   any request                           -> {"op":"error","id":..,"message":..}
// Each pooled connection carries one request at a time.
class ExternalModelClient : public ValueModel {
 public:
  explicit ExternalModelClient(const ExternalModelOptions& options);
  // Takes already-open channels; used for custom transports and tests.
  ExternalModelClient(std::vector<std::unique_ptr<LineChannel>> channels,
                      std::chrono::milliseconds timeout,
                      std::optional<std::size_t> expected_players = {});
  ~ExternalModelClient() override;

  std::size_t num_players() const override { return n_; }
  double score(const PlayerSet& present) const override;
  std::vector<double> score_batch(
      std::span<const PlayerSet> masks) const override;
  bool concurrent() const override { return true; }

  double peer_baseline_score() const { return baseline_score_; }

 private:
  struct Connection;
  class Lease;

  void handshake(std::optional<std::size_t> expected_players);

  std::vector<std::unique_ptr<Connection>> connections_;
  std::chrono::milliseconds timeout_;
  std::size_t n_ = 0;
  double baseline_score_ = 0.0;

  mutable std::mutex pool_mutex_;
  mutable std::condition_variable pool_cv_;
  mutable std::vector<Connection*> idle_;
};

}  // namespace itree

#endif  // ITREE_EXTERNAL_MODEL_HPP_
