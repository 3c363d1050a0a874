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

#include "memo.hpp"

#include <bit>
#include <exception>
#include <string>

#include "itree/errors.hpp"

namespace itree {
namespace {

// Quiet NaN payload that no arithmetic produces; marks an empty dense slot.
constexpr std::uint64_t kEmpty = 0x7ff8'dead'beef'0001ULL;

}  // namespace

Memo::Memo(std::shared_ptr<const ValueModel> model, MemoConfig config)
    : model_(std::move(model)), config_(config), n_(model_->num_players()) {
  if (config_.max_entries == 0 && n_ <= config_.dense_limit && n_ < 64) {
    const std::size_t size = std::size_t{1} << n_;
    dense_ = std::make_unique<std::atomic<std::uint64_t>[]>(size);
    for (std::size_t i = 0; i < size; ++i) {
      dense_[i].store(kEmpty, std::memory_order_relaxed);
    }
  }
}

double Memo::compute(const PlayerSet& positions) {
  try {
    if (model_->concurrent()) return model_->score(positions);
    std::lock_guard lock(model_mutex_);
    return model_->score(positions);
  } catch (const EvaluationError&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluationError(std::string("model evaluation failed: ") + e.what(),
                          positions.to_string());
  }
}

double Memo::get_bits(std::uint64_t positions) {
  if (dense_) {
    auto& slot = dense_[positions];
    std::uint64_t pattern = slot.load(std::memory_order_acquire);
    if (pattern != kEmpty) return std::bit_cast<double>(pattern);
    const double value = compute(PlayerSet::from_bits(n_, positions));
    std::uint64_t expected = kEmpty;
    if (slot.compare_exchange_strong(expected, std::bit_cast<std::uint64_t>(value),
                                     std::memory_order_acq_rel)) {
      ++dense_filled_;
    }
    return value;
  }
  return lookup_hashed(PlayerSet::from_bits(n_, positions));
}

double Memo::get(const PlayerSet& positions) {
  if (dense_) return get_bits(positions.bits());
  return lookup_hashed(positions);
}

double Memo::lookup_hashed(const PlayerSet& positions) {
  if (config_.max_entries == 0) {
    {
      std::shared_lock lock(map_mutex_);
      auto it = map_.find(positions);
      if (it != map_.end()) return it->second.value;
    }
    const double value = compute(positions);
    std::unique_lock lock(map_mutex_);
    map_.try_emplace(positions, Entry{value, {}});
    return value;
  }

  {
    std::unique_lock lock(map_mutex_);
    auto it = map_.find(positions);
    if (it != map_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.position);
      return it->second.value;
    }
  }
  const double value = compute(positions);
  std::unique_lock lock(map_mutex_);
  if (map_.contains(positions)) return value;
  lru_.push_front(positions);
  map_.emplace(positions, Entry{value, lru_.begin()});
  while (map_.size() > config_.max_entries) {
    map_.erase(lru_.back());
    lru_.pop_back();
  }
  return value;
}

std::size_t Memo::size() const {
  if (dense_) return dense_filled_.load();
  std::shared_lock lock(map_mutex_);
  return map_.size();
}

}  // namespace itree
