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

#include "itree/external_model.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <regex>
#include <thread>

#include "itree/errors.hpp"
#include "json.hpp"

extern char** environ;

namespace itree {

using nlohmann::json;

namespace {

void ignore_sigpipe() {
  static const bool done = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd, pid_t child = -1)
      : read_fd_(read_fd), write_fd_(write_fd), child_(child) {}

  ~FdChannel() override {
    if (write_fd_ != read_fd_ && write_fd_ >= 0) ::close(write_fd_);
    if (read_fd_ >= 0) ::close(read_fd_);
    if (child_ > 0) reap();
  }

  void write_line(const std::string& line) override {
    std::string data = line + "\n";
    const char* p = data.data();
    std::size_t left = data.size();
    while (left > 0) {
      const ssize_t k = ::write(write_fd_, p, left);
      if (k < 0) {
        if (errno == EINTR) continue;
        throw BridgeError(std::string("write to model peer failed: ") +
                          std::strerror(errno));
      }
      p += k;
      left -= static_cast<std::size_t>(k);
    }
  }

  std::string read_line(std::chrono::milliseconds timeout) override {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      const auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (remaining.count() <= 0) {
        throw BridgeError("model peer timed out after " +
                          std::to_string(timeout.count()) + " ms");
      }
      pollfd pfd{read_fd_, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
      if (ready < 0) {
        if (errno == EINTR) continue;
        throw BridgeError(std::string("poll failed: ") + std::strerror(errno));
      }
      if (ready == 0) continue;
      char chunk[4096];
      const ssize_t k = ::read(read_fd_, chunk, sizeof chunk);
      if (k < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw BridgeError(std::string("read from model peer failed: ") +
                          std::strerror(errno));
      }
      if (k == 0) throw BridgeError("model peer closed the connection");
      buffer_.append(chunk, static_cast<std::size_t>(k));
    }
  }

 private:
  void reap() {
    for (int i = 0; i < 50; ++i) {
      int status = 0;
      const pid_t r = ::waitpid(child_, &status, WNOHANG);
      if (r == child_ || r < 0) {
        ::kill(-child_, SIGKILL);
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(-child_, SIGKILL);
    int status = 0;
    ::waitpid(child_, &status, 0);
  }

  int read_fd_;
  int write_fd_;
  pid_t child_;
  std::string buffer_;
};

std::pair<std::string, std::string> split_address(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == address.size()) {
    throw BridgeError("expected host:port, got '" + address + "'");
  }
  return {address.substr(0, colon), address.substr(colon + 1)};
}

std::string mask_string(const PlayerSet& mask) { return mask.to_string(); }

}  // namespace

std::unique_ptr<LineChannel> spawn_subprocess(const std::string& command) {
  ignore_sigpipe();
  int to_child[2];
  int from_child[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) {
    throw BridgeError(std::string("pipe failed: ") + std::strerror(errno));
  }
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw BridgeError(std::string("pipe failed: ") + std::strerror(errno));
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);
  // Own process group, so teardown also reaches anything the shell forks.
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);
  const char* argv[] = {"sh", "-c", command.c_str(), nullptr};
  pid_t pid = -1;
  const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, &attr,
                               const_cast<char* const*>(argv), environ);
  posix_spawnattr_destroy(&attr);
  posix_spawn_file_actions_destroy(&actions);
  ::close(to_child[0]);
  ::close(from_child[1]);
  if (rc != 0) {
    ::close(to_child[1]);
    ::close(from_child[0]);
    throw BridgeError(std::string("cannot start model peer: ") + std::strerror(rc));
  }
  return std::make_unique<FdChannel>(from_child[0], to_child[1], pid);
}

std::unique_ptr<LineChannel> connect_tcp(const std::string& address) {
  ignore_sigpipe();
  const auto [host, port] = split_address(address);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  const int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &found);
  if (rc != 0) {
    throw BridgeError("cannot resolve " + address + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* ai = found; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(found);
  if (fd < 0) throw BridgeError("cannot connect to " + address);
  return std::make_unique<FdChannel>(fd, fd);
}

struct ExternalModelClient::Connection {
  std::unique_ptr<LineChannel> channel;
  std::uint64_t next_id = 1;
  bool broken = false;

  json request(const json& frame, std::chrono::milliseconds timeout) {
    if (broken) throw BridgeError("connection to model peer is unusable");
    try {
      channel->write_line(frame.dump());
      const std::string line = channel->read_line(timeout);
      json reply;
      try {
        reply = json::parse(line);
      } catch (const json::exception&) {
        throw BridgeError("malformed reply from model peer: " + line);
      }
      if (!reply.is_object()) {
        throw BridgeError("malformed reply from model peer: " + line);
      }
      // Peers may omit "op" on ordinary replies.
      if (reply.contains("op")) {
        if (reply["op"] == "error") {
          const std::string message = reply.value("message", std::string("unknown"));
          throw BridgeError("model peer error: " + message);
        }
        if (reply["op"] != frame["op"]) {
          throw BridgeError("unexpected reply op from model peer: " + line);
        }
      }
      return reply;
    } catch (const BridgeError& e) {
      // Error frames leave the stream in sync; anything else may not.
      if (std::string_view(e.what()).rfind("model peer error: ", 0) != 0) {
        broken = true;
      }
      throw;
    }
  }
};

class ExternalModelClient::Lease {
 public:
  explicit Lease(const ExternalModelClient& client) : client_(client) {
    std::unique_lock lock(client_.pool_mutex_);
    client_.pool_cv_.wait(lock, [&] { return !client_.idle_.empty(); });
    conn_ = client_.idle_.back();
    client_.idle_.pop_back();
  }
  ~Lease() {
    {
      std::lock_guard lock(client_.pool_mutex_);
      client_.idle_.push_back(conn_);
    }
    client_.pool_cv_.notify_one();
  }
  Lease(const Lease&) = delete;
  Lease& operator=(const Lease&) = delete;

  Connection& operator*() const { return *conn_; }
  Connection* operator->() const { return conn_; }

 private:
  const ExternalModelClient& client_;
  Connection* conn_ = nullptr;
};

namespace {

std::vector<std::unique_ptr<LineChannel>> open_channels(
    const ExternalModelOptions& options) {
  if (options.pool_size == 0) throw ConfigError("bridge pool size must be >= 1");
  if (options.endpoint.empty()) throw ConfigError("bridge endpoint is empty");
  static const std::regex host_port(R"(^[A-Za-z0-9._\-]+:[0-9]+$)");
  std::vector<std::unique_ptr<LineChannel>> out;
  for (std::size_t i = 0; i < options.pool_size; ++i) {
    const std::string& ep = options.endpoint;
    if (ep.rfind("tcp:", 0) == 0) {
      out.push_back(connect_tcp(ep.substr(4)));
    } else if (ep.rfind("cmd:", 0) == 0) {
      out.push_back(spawn_subprocess(ep.substr(4)));
    } else if (std::regex_match(ep, host_port)) {
      out.push_back(connect_tcp(ep));
    } else {
      out.push_back(spawn_subprocess(ep));
    }
  }
  return out;
}

}  // namespace

ExternalModelClient::ExternalModelClient(const ExternalModelOptions& options)
    : ExternalModelClient(open_channels(options), options.timeout,
                          options.expected_players) {}

ExternalModelClient::ExternalModelClient(
    std::vector<std::unique_ptr<LineChannel>> channels,
    std::chrono::milliseconds timeout, std::optional<std::size_t> expected_players)
    : timeout_(timeout) {
  if (channels.empty()) throw ConfigError("bridge needs at least one channel");
  for (auto& ch : channels) {
    auto conn = std::make_unique<Connection>();
    conn->channel = std::move(ch);
    connections_.push_back(std::move(conn));
  }
  handshake(expected_players);
  for (auto& conn : connections_) idle_.push_back(conn.get());
}

ExternalModelClient::~ExternalModelClient() = default;

void ExternalModelClient::handshake(std::optional<std::size_t> expected_players) {
  bool first = true;
  for (auto& conn : connections_) {
    const json reply = conn->request({{"op", "hello"}, {"version", 1}}, timeout_);
    if (!reply.contains("n") || !reply["n"].is_number_integer() ||
        reply["n"].get<long long>() < 1) {
      throw BridgeError("handshake reply lacks a positive integer n");
    }
    const auto n = reply["n"].get<std::size_t>();
    double baseline = 0.0;
    if (reply.contains("baseline_score")) {
      if (!reply["baseline_score"].is_number()) {
        throw BridgeError("handshake baseline_score is not a number");
      }
      baseline = reply["baseline_score"].get<double>();
    }
    if (first) {
      n_ = n;
      baseline_score_ = baseline;
      first = false;
    } else if (n != n_) {
      throw BridgeError("pooled peers disagree on n");
    }
  }
  if (expected_players && *expected_players != n_) {
    throw BridgeError("handshake mismatch: peer reports n=" + std::to_string(n_) +
                      ", expected " + std::to_string(*expected_players));
  }
}

double ExternalModelClient::score(const PlayerSet& present) const {
  if (present.universe_size() != n_) {
    throw EvaluationError("mask length does not match the peer's n",
                          mask_string(present));
  }
  Lease conn(*this);
  const std::uint64_t id = conn->next_id++;
  try {
    const json reply = conn->request(
        {{"op", "score"}, {"id", id}, {"mask", mask_string(present)}}, timeout_);
    if (!reply.contains("id") || reply["id"] != id) {
      conn->broken = true;
      throw BridgeError("reply id does not match request " + std::to_string(id));
    }
    if (!reply.contains("score") || !reply["score"].is_number()) {
      throw BridgeError("reply lacks a numeric score");
    }
    return reply["score"].get<double>();
  } catch (const BridgeError& e) {
    throw EvaluationError(e.what(), mask_string(present));
  }
}

std::vector<double> ExternalModelClient::score_batch(
    std::span<const PlayerSet> masks) const {
  if (masks.empty()) return {};
  json ids = json::array();
  json strings = json::array();
  for (const auto& m : masks) {
    if (m.universe_size() != n_) {
      throw EvaluationError("mask length does not match the peer's n",
                            mask_string(m));
    }
    strings.push_back(mask_string(m));
  }
  Lease conn(*this);
  for (std::size_t i = 0; i < masks.size(); ++i) ids.push_back(conn->next_id++);
  try {
    const json reply = conn->request(
        {{"op", "score_batch"}, {"ids", ids}, {"masks", strings}}, timeout_);
    if (!reply.contains("ids") || reply["ids"] != ids) {
      conn->broken = true;
      throw BridgeError("batch reply ids do not match the request");
    }
    if (!reply.contains("scores") || !reply["scores"].is_array() ||
        reply["scores"].size() != masks.size()) {
      throw BridgeError("batch reply lacks a scores array of matching length");
    }
    std::vector<double> out;
    out.reserve(masks.size());
    for (const auto& s : reply["scores"]) {
      if (!s.is_number()) throw BridgeError("batch reply has a non-numeric score");
      out.push_back(s.get<double>());
    }
    return out;
  } catch (const BridgeError& e) {
    throw EvaluationError(e.what(), strings[0].get<std::string>());
  }
}

}  // namespace itree
