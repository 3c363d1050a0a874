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

#ifndef ITREE_SRC_MEMO_HPP_
#define ITREE_SRC_MEMO_HPP_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "itree/game.hpp"
#include "itree/player_set.hpp"
#include "itree/value_model.hpp"

namespace itree {

// Position-mask -> score cache in front of a ValueModel. Dense universes use a
// lock-free table of bit patterns; others a hash map, LRU-bounded on request.
class Memo {
 public:
  Memo(std::shared_ptr<const ValueModel> model, MemoConfig config);

  double get(const PlayerSet& positions);
  double get_bits(std::uint64_t positions);
  std::size_t size() const;

 private:
  double compute(const PlayerSet& positions);
  double lookup_hashed(const PlayerSet& positions);

  std::shared_ptr<const ValueModel> model_;
  MemoConfig config_;
  std::size_t n_;
  std::mutex model_mutex_;

  std::unique_ptr<std::atomic<std::uint64_t>[]> dense_;
  std::atomic<std::size_t> dense_filled_{0};

  mutable std::shared_mutex map_mutex_;
  using LruList = std::list<PlayerSet>;
  struct Entry {
    double value;
    LruList::iterator position;
  };
  std::unordered_map<PlayerSet, Entry, PlayerSetHash> map_;
  LruList lru_;
};

}  // namespace itree

#endif  // ITREE_SRC_MEMO_HPP_
