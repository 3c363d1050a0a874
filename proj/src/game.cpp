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

#include "itree/game.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "itree/errors.hpp"
#include "itree/rng.hpp"
#include "memo.hpp"

namespace itree {

CoalitionStructure::CoalitionStructure(std::size_t universe_size,
                                       std::vector<Coalition> blocks)
    : universe_size_(universe_size), blocks_(std::move(blocks)) {
  PlayerSet seen(universe_size_);
  for (const auto& b : blocks_) {
    if (b.members.universe_size() != universe_size_) {
      throw ConfigError("coalition universe does not match the structure");
    }
    if (b.members.empty()) throw ConfigError("coalitions must be non-empty");
    if (b.members.intersects(seen)) {
      throw ConfigError("coalitions of a structure must be disjoint");
    }
    seen |= b.members;
  }
  std::stable_sort(blocks_.begin(), blocks_.end(),
                   [](const Coalition& a, const Coalition& b) {
                     return a.members.first() < b.members.first();
                   });
}

CoalitionStructure CoalitionStructure::singletons(const PlayerSet& players) {
  std::vector<Coalition> blocks;
  for (std::size_t i : players.members()) {
    blocks.push_back({PlayerSet::of(players.universe_size(), {i}),
                      std::to_string(i)});
  }
  return CoalitionStructure(players.universe_size(), std::move(blocks));
}

CoalitionStructure CoalitionStructure::fuse(const PlayerSet& others,
                                            const PlayerSet& fused) {
  std::vector<Coalition> blocks;
  for (std::size_t i : others.members()) {
    blocks.push_back({PlayerSet::of(others.universe_size(), {i}),
                      std::to_string(i)});
  }
  blocks.push_back({fused, "[" + fused.to_string() + "]"});
  return CoalitionStructure(others.universe_size(), std::move(blocks));
}

PlayerSet CoalitionStructure::covered() const {
  PlayerSet out(universe_size_);
  for (const auto& b : blocks_) out |= b.members;
  return out;
}

std::size_t CoalitionStructure::block_of(std::size_t player) const {
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].members.contains(player)) return i;
  }
  return blocks_.size();
}

GameContext::GameContext(std::shared_ptr<const ValueModel> model,
                         MemoConfig memo_config)
    : model_(std::move(model)) {
  if (!model_) throw ConfigError("GameContext needs a model");
  num_positions_ = model_->num_players();
  if (num_positions_ == 0) throw ConfigError("model has no players");
  memo_ = std::make_shared<Memo>(model_, memo_config);
  blocks_.reserve(num_positions_);
  for (std::size_t i = 0; i < num_positions_; ++i) {
    blocks_.push_back(PlayerSet::of(num_positions_, {i}));
  }
  init_fast_path();
}

GameContext::GameContext(std::shared_ptr<const ValueModel> model,
                         std::shared_ptr<Memo> memo, std::size_t num_positions,
                         std::vector<PlayerSet> blocks)
    : model_(std::move(model)),
      memo_(std::move(memo)),
      num_positions_(num_positions),
      blocks_(std::move(blocks)) {
  init_fast_path();
}

void GameContext::init_fast_path() {
  fast_path_ = num_positions_ <= 64 && blocks_.size() <= 64;
  block_bits_.clear();
  if (fast_path_) {
    for (const auto& b : blocks_) block_bits_.push_back(b.bits());
  }
}

PlayerSet GameContext::active_positions() const {
  PlayerSet out(num_positions_);
  for (const auto& b : blocks_) out |= b;
  return out;
}

double GameContext::evaluate(const PlayerSet& present) const {
  if (present.universe_size() != num_players()) {
    throw ConfigError("coalition universe (" +
                      std::to_string(present.universe_size()) +
                      ") does not match the game's " +
                      std::to_string(num_players()) + " players");
  }
  if (fast_path_) return evaluate_bits(present.bits());
  PlayerSet positions(num_positions_);
  for (std::size_t p : present.members()) positions |= blocks_[p];
  return memo_->get(positions);
}

double GameContext::evaluate_bits(std::uint64_t present_players) const {
  std::uint64_t positions = 0;
  for (std::uint64_t w = present_players; w != 0; w &= w - 1) {
    positions |= block_bits_[std::countr_zero(w)];
  }
  return memo_->get_bits(positions);
}

double GameContext::evaluate_positions(const PlayerSet& positions) const {
  if (positions.universe_size() != num_positions_) {
    throw ConfigError("position mask has the wrong length");
  }
  return memo_->get(positions);
}

double GameContext::baseline_score() const {
  return memo_->get(PlayerSet(num_positions_));
}

GameContext GameContext::reduce(const CoalitionStructure& structure) const {
  if (structure.size() == 0) {
    throw ConfigError("cannot reduce a game to an empty coalition structure");
  }
  if (structure.universe_size() != num_players()) {
    throw ConfigError("coalition structure is over " +
                      std::to_string(structure.universe_size()) +
                      " players but the game has " +
                      std::to_string(num_players()));
  }
  std::vector<PlayerSet> blocks;
  blocks.reserve(structure.size());
  for (const auto& coalition : structure.blocks()) {
    PlayerSet positions(num_positions_);
    for (std::size_t p : coalition.members.members()) positions |= blocks_[p];
    blocks.push_back(std::move(positions));
  }
  return GameContext(model_, memo_, num_positions_, std::move(blocks));
}

GameContext GameContext::restrict_to(const PlayerSet& players) const {
  return reduce(CoalitionStructure::singletons(players));
}

std::uint64_t GameContext::layout_hash() const {
  std::uint64_t h = splitmix64(num_positions_);
  for (const auto& b : blocks_) {
    for (auto w : b.words()) h = splitmix64(h ^ w);
    h = splitmix64(h ^ 0xb10c);
  }
  return h;
}

std::size_t GameContext::memo_size() const { return memo_->size(); }

}  // namespace itree
