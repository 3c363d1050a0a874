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

#ifndef ITREE_GAME_HPP_
#define ITREE_GAME_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "itree/player_set.hpp"
#include "itree/value_model.hpp"

namespace itree {

// A set of players fused into a single player.
struct Coalition {
  PlayerSet members;
  std::string label;
};

// Pairwise-disjoint coalitions over a universe of `universe_size` players,
// kept sorted by their leftmost member.
class CoalitionStructure {
 public:
  CoalitionStructure(std::size_t universe_size, std::vector<Coalition> blocks);

  // One singleton block per member of `players`.
  static CoalitionStructure singletons(const PlayerSet& players);
  // Singletons for every member of `others` plus the fused block `fused`.
  static CoalitionStructure fuse(const PlayerSet& others,
                                 const PlayerSet& fused);

  std::size_t universe_size() const { return universe_size_; }
  std::size_t size() const { return blocks_.size(); }
  const std::vector<Coalition>& blocks() const { return blocks_; }
  const Coalition& block(std::size_t i) const { return blocks_[i]; }
  PlayerSet covered() const;
  // Index of the block containing `player`, or size() if none does.
  std::size_t block_of(std::size_t player) const;

 private:
  std::size_t universe_size_;
  std::vector<Coalition> blocks_;
};

struct MemoConfig {
  // 0 means unbounded. A cap forces the hashed, LRU-evicting memo.
  std::size_t max_entries = 0;
  // Universes up to this many positions use a dense lock-free table.
  std::size_t dense_limit = 20;
};

class Memo;

// The set function v over a model's positions, viewed through a coalition
// structure. Player i of a game is the block of positions `block(i)`; all
// positions outside the union of blocks stay masked. Reduced games share the
// memo of the game they were derived from.
class GameContext {
 public:
  explicit GameContext(std::shared_ptr<const ValueModel> model,
                       MemoConfig memo_config = {});

  std::size_t num_players() const { return blocks_.size(); }
  std::size_t num_positions() const { return num_positions_; }
  const PlayerSet& block(std::size_t player) const { return blocks_[player]; }
  const std::vector<PlayerSet>& blocks() const { return blocks_; }
  PlayerSet active_positions() const;
  const ValueModel& model() const { return *model_; }
  std::shared_ptr<const ValueModel> model_ptr() const { return model_; }

  // v(present) for a set over this game's players.
  double evaluate(const PlayerSet& present) const;
  // Fast path for games with <= 64 players and <= 64 positions.
  double evaluate_bits(std::uint64_t present_players) const;
  // Scores a set of positions directly through the memo.
  double evaluate_positions(const PlayerSet& positions) const;
  double baseline_score() const;
  bool fast_path() const { return fast_path_; }

  // Players of the result are the blocks of `structure`, which is expressed in
  // this game's player indices.
  GameContext reduce(const CoalitionStructure& structure) const;
  // Keeps only `players` as singletons; the others become permanently masked.
  GameContext restrict_to(const PlayerSet& players) const;

  // Stable 64-bit fingerprint of the block layout.
  std::uint64_t layout_hash() const;
  std::size_t memo_size() const;

 private:
  GameContext(std::shared_ptr<const ValueModel> model,
              std::shared_ptr<Memo> memo, std::size_t num_positions,
              std::vector<PlayerSet> blocks);
  void init_fast_path();

  std::shared_ptr<const ValueModel> model_;
  std::shared_ptr<Memo> memo_;
  std::size_t num_positions_;
  std::vector<PlayerSet> blocks_;
  bool fast_path_ = false;
  std::vector<std::uint64_t> block_bits_;
};

}  // namespace itree

#endif  // ITREE_GAME_HPP_
