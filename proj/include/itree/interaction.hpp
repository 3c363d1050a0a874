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

#ifndef ITREE_INTERACTION_HPP_
#define ITREE_INTERACTION_HPP_

#include <bit>
#include <cstddef>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "itree/game.hpp"
#include "itree/player_set.hpp"
#include "itree/shapley.hpp"

namespace itree {

struct PsiTerms {
  double inter = 0.0;
  double intra_first = 0.0;
  double intra_second = 0.0;
};

// Full breakdown of B([S1 u S2]) for one split.
struct InteractionResult {
  double benefit = 0.0;         // B([S])
  double benefit_first = 0.0;   // B([S1])
  double benefit_second = 0.0;  // B([S2])
  double between = 0.0;         // B_between(S1, S2)
  PsiTerms psi;
};

// phi of the fused coalition [S] in the game whose players are the members of
// N \ S plus [S].
double coalition_contribution(const GameContext& game, const PlayerSet& coalition,
                              const Engine& engine);

// B([S]): contribution of [S] minus the contributions each member of S makes
// when it is the only member of S in the game.
double interaction_benefit(const GameContext& game, const PlayerSet& coalition,
                           const Engine& engine);

// B([S1 u S2]) - B([S1]) - B([S2]).
double between_benefit(const GameContext& game, const PlayerSet& first,
                       const PlayerSet& second, const Engine& engine);

// intra terms: B of each side with the other side removed from the game,
// minus its B in the full game. inter closes the between-benefit identity.
PsiTerms psi_decomposition(const GameContext& game, const PlayerSet& first,
                           const PlayerSet& second, const Engine& engine);

inline constexpr std::size_t kMaxComponentCoalition = 15;

// Elementary interaction components I(L) for every L subset of S, where each
// I(L) lives in the game with players (N \ S) u L. Indexed by a local mask
// over `members` (bit k = members[k]); the empty set maps to 0.
struct ElementaryComponents {
  std::size_t universe_size = 0;
  std::vector<std::size_t> members;
  std::vector<double> values;

  double at(const PlayerSet& subset) const;
  // Sum of I(L) over L with |L| > 1 accepted by `keep(local_mask)`.
  template <typename Pred>
  double sum_if(Pred keep) const {
    double total = 0.0;
    for (std::size_t mask = 0; mask < values.size(); ++mask) {
      if (std::popcount(mask) > 1 && keep(mask)) total += values[mask];
    }
    return total;
  }
};

ElementaryComponents elementary_components(const GameContext& game,
                                           const PlayerSet& coalition,
                                           const Engine& engine = Engine::exact());

// Caches contributions and benefits of coalitions of one game. Safe to share
// between threads.
class InteractionAnalyzer {
 public:
  InteractionAnalyzer(const GameContext& game, Engine engine,
                      std::size_t workers = 1);

  const GameContext& game() const { return game_; }
  const Engine& engine() const { return engine_; }

  double contribution(const PlayerSet& coalition);
  double benefit(const PlayerSet& coalition);
  double between(const PlayerSet& first, const PlayerSet& second);
  PsiTerms psi(const PlayerSet& first, const PlayerSet& second);
  InteractionResult analyze(const PlayerSet& first, const PlayerSet& second);

 private:
  const GameContext& game_;
  Engine engine_;
  std::size_t workers_;
  std::mutex mutex_;
  std::unordered_map<PlayerSet, double, PlayerSetHash> contributions_;
  std::unordered_map<PlayerSet, double, PlayerSetHash> benefits_;
};

}  // namespace itree

#endif  // ITREE_INTERACTION_HPP_
