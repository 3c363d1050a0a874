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

#ifndef ITREE_TREE_BUILDER_HPP_
#define ITREE_TREE_BUILDER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "itree/game.hpp"
#include "itree/interaction.hpp"
#include "itree/shapley.hpp"
#include "itree/tree.hpp"

namespace itree {

enum class EngineChoice { kAuto, kExact, kSampled };

struct TreeRecipe {
  Strategy strategy = Strategy::kOurs;
  EngineChoice engine = EngineChoice::kAuto;
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  bool antithetic = false;
  // Attach B/psi/r/s/t/phi to every internal node.
  bool annotate = true;
  // kAuto picks the exact engine up to this many players.
  std::size_t exact_limit = 12;

  Engine resolve_engine(std::size_t num_players) const;
};

// State handed to a StepObserver before each merge.
struct MergeStep {
  std::size_t step = 0;  // 1-based
  const std::vector<PlayerSet>* frontier = nullptr;
  const std::vector<double>* keys = nullptr;
  std::size_t chosen = 0;
  InteractionAnalyzer* analyzer = nullptr;
};

using StepObserver = std::function<void(const MergeStep&)>;

struct BuildOptions {
  std::size_t workers = 1;
  std::vector<std::string> labels;
  StepObserver observer;
};

// Carries the merges completed before the failure.
class TreeBuildError : public std::runtime_error {
 public:
  TreeBuildError(const std::string& message, InteractionTree partial)
      : std::runtime_error(message), partial_(std::move(partial)) {}
  const InteractionTree& partial() const { return partial_; }

 private:
  InteractionTree partial_;
};

// Greedy bottom-up merging of adjacent frontier nodes. Each step scores all
// adjacent pairs by the strategy key and merges the maximum (leftmost among
// ties).
InteractionTree build_tree(const GameContext& game, const TreeRecipe& recipe,
                           const BuildOptions& options = {});

// SHAP interaction value of players a and b of `game`.
double shap_interaction_pair(const GameContext& game, std::size_t a,
                             std::size_t b, const Engine& engine);

double node_contribution(const GameContext& game, const TreeNode& node,
                         const Engine& engine);

}  // namespace itree

#endif  // ITREE_TREE_BUILDER_HPP_
