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

#ifndef ITREE_VALUE_MODEL_HPP_
#define ITREE_VALUE_MODEL_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "itree/player_set.hpp"

namespace itree {

// A black-box scoring function over input positions. `score` receives the set
// of present (unmasked) positions; every other position takes the model's own
// baseline value. Implementations must be deterministic in the mask.
class ValueModel {
 public:
  virtual ~ValueModel() = default;

  virtual std::size_t num_players() const = 0;
  virtual double score(const PlayerSet& present) const = 0;

  // Scores several masks. The default forwards to `score`.
  virtual std::vector<double> score_batch(
      std::span<const PlayerSet> masks) const;

  // True when `score` may be called from several threads at once.
  virtual bool concurrent() const { return true; }
};

// A model that can also score a reordering of its full input. `order` is a
// permutation of the original position indices.
class SequenceScorer {
 public:
  virtual ~SequenceScorer() = default;
  virtual double score_sequence(std::span<const std::size_t> order) const = 0;
};

}  // namespace itree

#endif  // ITREE_VALUE_MODEL_HPP_
