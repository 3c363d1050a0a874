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

#ifndef ITREE_TOY_MODELS_HPP_
#define ITREE_TOY_MODELS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "itree/player_set.hpp"
#include "itree/value_model.hpp"

namespace itree {

struct PairBonus {
  std::size_t first = 0;
  std::size_t second = 0;
  double value = 0.0;
};

// Additive word weights plus planted pairwise bonuses. Under masking a bonus
// fires when both of its positions are present. Under reordering it fires when
// `second` sits exactly (second - first) slots after `first`, so scattering a
// bonded pair removes the bonus.
class ToyTextModel : public ValueModel, public SequenceScorer {
 public:
  ToyTextModel(std::vector<double> weights, std::vector<PairBonus> bonuses = {});

  std::size_t num_players() const override { return weights_.size(); }
  double score(const PlayerSet& present) const override;
  double score_sequence(std::span<const std::size_t> order) const override;

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<PairBonus>& bonuses() const { return bonuses_; }

 private:
  std::vector<double> weights_;
  std::vector<PairBonus> bonuses_;
};

// A game given by its full value table over 2^n masks (n <= 24).
class TabularModel : public ValueModel {
 public:
  TabularModel(std::size_t n, std::vector<double> values);
  static TabularModel from_function(
      std::size_t n, const std::function<double(std::uint64_t)>& v);

  std::size_t num_players() const override { return n_; }
  double score(const PlayerSet& present) const override;
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

// Small reference games.
TabularModel and_game(std::size_t n);       // 1 iff every player present
TabularModel or_game(std::size_t n);        // 1 iff any player present
TabularModel majority_game(std::size_t n);  // 1 iff more than half present

}  // namespace itree

#endif  // ITREE_TOY_MODELS_HPP_
