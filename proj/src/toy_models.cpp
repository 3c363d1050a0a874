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

#include "itree/toy_models.hpp"

#include <bit>
#include <string>

#include "itree/errors.hpp"

namespace itree {

ToyTextModel::ToyTextModel(std::vector<double> weights,
                           std::vector<PairBonus> bonuses)
    : weights_(std::move(weights)), bonuses_(std::move(bonuses)) {
  if (weights_.empty()) throw ConfigError("toy model needs at least one word");
  for (const auto& b : bonuses_) {
    if (b.first >= b.second || b.second >= weights_.size()) {
      throw ConfigError("bonus (" + std::to_string(b.first) + "," +
                        std::to_string(b.second) +
                        ") must reference two positions i < j < " +
                        std::to_string(weights_.size()));
    }
  }
}

double ToyTextModel::score(const PlayerSet& present) const {
  double total = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (present.contains(i)) total += weights_[i];
  }
  for (const auto& b : bonuses_) {
    if (present.contains(b.first) && present.contains(b.second)) total += b.value;
  }
  return total;
}

double ToyTextModel::score_sequence(std::span<const std::size_t> order) const {
  const std::size_t n = weights_.size();
  if (order.size() != n) throw ConfigError("sequence length mismatch");
  std::vector<std::size_t> slot(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (order[k] >= n || slot[order[k]] != n) {
      throw ConfigError("sequence must be a permutation of the positions");
    }
    slot[order[k]] = k;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += weights_[i];
  for (const auto& b : bonuses_) {
    if (slot[b.second] > slot[b.first] &&
        slot[b.second] - slot[b.first] == b.second - b.first) {
      total += b.value;
    }
  }
  return total;
}

TabularModel::TabularModel(std::size_t n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (n == 0 || n > 24) throw ConfigError("tabular games need 1..24 players");
  if (values_.size() != (std::size_t{1} << n)) {
    throw ConfigError("tabular game needs 2^n values");
  }
}

TabularModel TabularModel::from_function(
    std::size_t n, const std::function<double(std::uint64_t)>& v) {
  std::vector<double> values(std::size_t{1} << n);
  for (std::size_t m = 0; m < values.size(); ++m) values[m] = v(m);
  return TabularModel(n, std::move(values));
}

double TabularModel::score(const PlayerSet& present) const {
  return values_[present.bits()];
}

TabularModel and_game(std::size_t n) {
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  return TabularModel::from_function(
      n, [full](std::uint64_t m) { return m == full ? 1.0 : 0.0; });
}

TabularModel or_game(std::size_t n) {
  return TabularModel::from_function(
      n, [](std::uint64_t m) { return m != 0 ? 1.0 : 0.0; });
}

TabularModel majority_game(std::size_t n) {
  return TabularModel::from_function(n, [n](std::uint64_t m) {
    return 2 * static_cast<std::size_t>(std::popcount(m)) > n ? 1.0 : 0.0;
  });
}

}  // namespace itree
