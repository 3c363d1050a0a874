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

#include "itree/metrics.hpp"

#include <cmath>
#include <utility>

#include "itree/errors.hpp"

namespace itree {
namespace {

double density_denominator(const MergeCandidate& c) {
  return std::abs(c.between) + std::abs(c.left_between) +
         std::abs(c.right_between) + std::abs(c.phi_left) +
         std::abs(c.phi_right);
}

}  // namespace

double modeled_density(const MergeCandidate& c) {
  const double denom = density_denominator(c);
  return denom == 0.0 ? 0.0 : std::abs(c.between) / denom;
}

double unmodeled_density(const MergeCandidate& c) {
  const double denom = density_denominator(c);
  return denom == 0.0
             ? 0.0
             : (std::abs(c.left_between) + std::abs(c.right_between)) / denom;
}

double inter_ratio(const PsiTerms& psi) {
  const double inter = std::abs(psi.inter);
  const double denom = inter + std::abs(psi.intra_first + psi.intra_second);
  return denom == 0.0 ? 0.0 : inter / denom;
}

double inter_ratio(const GameContext& game, const PlayerSet& left,
                   const PlayerSet& right, const Engine& engine) {
  return inter_ratio(psi_decomposition(game, left, right, engine));
}

MergeCandidate evaluate_candidate(InteractionAnalyzer& analyzer,
                                  const std::vector<PlayerSet>& frontier,
                                  std::size_t i) {
  if (i + 1 >= frontier.size()) {
    throw ConfigError("candidate index past the end of the frontier");
  }
  MergeCandidate c;
  c.left = frontier[i];
  c.right = frontier[i + 1];
  c.between = analyzer.between(c.left, c.right);
  if (i > 0) c.left_between = analyzer.between(frontier[i - 1], c.left);
  if (i + 2 < frontier.size()) {
    c.right_between = analyzer.between(c.right, frontier[i + 2]);
  }
  c.phi_left = analyzer.contribution(c.left);
  c.phi_right = analyzer.contribution(c.right);
  c.r = modeled_density(c);
  c.s = unmodeled_density(c);
  return c;
}

double nonadjacent_density(InteractionAnalyzer& analyzer,
                           const std::vector<PlayerSet>& frontier,
                           std::size_t a, std::size_t c) {
  if (a > c) std::swap(a, c);
  if (c >= frontier.size()) throw ConfigError("frontier index out of range");
  if (c - a < 2) {
    throw ConfigError("r' is defined for non-adjacent nodes only");
  }
  const double b_ac = std::abs(analyzer.between(frontier[a], frontier[c]));
  double denom = b_ac;
  if (a > 0) denom += std::abs(analyzer.between(frontier[a - 1], frontier[a]));
  denom += std::abs(analyzer.between(frontier[a], frontier[a + 1]));
  denom += std::abs(analyzer.between(frontier[c - 1], frontier[c]));
  if (c + 1 < frontier.size()) {
    denom += std::abs(analyzer.between(frontier[c], frontier[c + 1]));
  }
  denom += std::abs(analyzer.contribution(frontier[a])) +
           std::abs(analyzer.contribution(frontier[c]));
  return denom == 0.0 ? 0.0 : b_ac / denom;
}

}  // namespace itree
