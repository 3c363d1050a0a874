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

#ifndef ITREE_METRICS_HPP_
#define ITREE_METRICS_HPP_

#include <cstddef>
#include <vector>

#include "itree/interaction.hpp"
#include "itree/player_set.hpp"

namespace itree {

// An adjacent pair (a, b) of frontier nodes with its neighbourhood. Absent
// neighbours contribute 0.
struct MergeCandidate {
  PlayerSet left;
  PlayerSet right;
  double between = 0.0;        // B_ab
  double left_between = 0.0;   // B_a'a
  double right_between = 0.0;  // B_bb'
  double phi_left = 0.0;
  double phi_right = 0.0;
  double r = 0.0;
  double s = 0.0;
};

double modeled_density(const MergeCandidate& c);
double unmodeled_density(const MergeCandidate& c);

// |psi_inter| / (|psi_inter| + |psi_intra_l + psi_intra_r|), 0 when both vanish.
double inter_ratio(const PsiTerms& psi);
double inter_ratio(const GameContext& game, const PlayerSet& left,
                   const PlayerSet& right, const Engine& engine);

// Scores the pair (frontier[i], frontier[i + 1]); r and s are filled in.
MergeCandidate evaluate_candidate(InteractionAnalyzer& analyzer,
                                  const std::vector<PlayerSet>& frontier,
                                  std::size_t i);

// r'(a, c) for non-adjacent frontier nodes a < c - 1.
double nonadjacent_density(InteractionAnalyzer& analyzer,
                           const std::vector<PlayerSet>& frontier,
                           std::size_t a, std::size_t c);

}  // namespace itree

#endif  // ITREE_METRICS_HPP_
