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

#include "itree/tree_builder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "itree/errors.hpp"
#include "itree/metrics.hpp"
#include "itree/parallel.hpp"
#include "itree/rng.hpp"

namespace itree {
namespace {

inline constexpr std::size_t kShapInteractionExactCap = 15;
// Keys within this fraction of the key scale of the maximum count as ties.
inline constexpr double kTieTolerance = 1e-9;

Span span_of(const PlayerSet& s) {
  const std::size_t start = s.first();
  return {start, start + s.count() - 1};
}

bool needs_engine(const TreeRecipe& recipe) {
  return recipe.annotate || recipe.strategy == Strategy::kOurs ||
         recipe.strategy == Strategy::kShapInteraction ||
         recipe.strategy == Strategy::kShapInteractionAbs;
}

std::size_t pick_leftmost_max(const std::vector<double>& keys, double scale) {
  const double best = *std::max_element(keys.begin(), keys.end());
  const double tolerance = kTieTolerance * scale;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] >= best - tolerance) return i;
  }
  return 0;
}

}  // namespace

Engine TreeRecipe::resolve_engine(std::size_t num_players) const {
  const Engine sampled_engine = Engine::sampled({samples, seed, antithetic});
  switch (engine) {
    case EngineChoice::kExact:
      return Engine::exact();
    case EngineChoice::kSampled:
      return sampled_engine;
    case EngineChoice::kAuto:
      break;
  }
  return num_players <= exact_limit ? Engine::exact() : sampled_engine;
}

double shap_interaction_pair(const GameContext& game, std::size_t a,
                             std::size_t b, const Engine& engine) {
  const std::size_t m = game.num_players();
  if (a == b || a >= m || b >= m) {
    throw ConfigError("SHAP interaction needs two distinct players");
  }
  if (a > b) std::swap(a, b);
  const std::uint64_t pair_bits = (std::uint64_t{1} << a) | (std::uint64_t{1} << b);

  if (engine.is_exact()) {
    if (m > kShapInteractionExactCap) {
      throw CapacityError("exact SHAP interaction supports at most " +
                          std::to_string(kShapInteractionExactCap) +
                          " players, got " + std::to_string(m));
    }
    auto v = [&](std::uint64_t mask) {
      return game.fast_path() ? game.evaluate_bits(mask)
                              : game.evaluate(PlayerSet::from_bits(m, mask));
    };
    const std::uint64_t a_bit = std::uint64_t{1} << a;
    const std::uint64_t b_bit = std::uint64_t{1} << b;
    const std::uint64_t others = ((std::uint64_t{1} << m) - 1) & ~pair_bits;
    double total = 0.0;
    std::uint64_t t = 0;
    while (true) {
      // |T|!(m-|T|-2)!/(2(m-1)!) is half the Shapley weight among m-1 players.
      const double w = 0.5 * shapley_weight(std::popcount(t), m - 1);
      total += w * (v(t | a_bit | b_bit) - v(t | a_bit) - v(t | b_bit) + v(t));
      if (t == others) break;
      t = (t - others) & others;
    }
    return total;
  }

  // Sampled: order the other players with the pair fused into one token; the
  // players before the token form the coalition.
  const SamplingConfig& cfg = engine.sampling;
  if (cfg.samples == 0) throw ConfigError("sampling needs T >= 1");
  std::vector<std::size_t> tokens;
  for (std::size_t p = 0; p < m; ++p) {
    if (p != b) tokens.push_back(p);  // `a` stands for the fused pair
  }
  double total = 0.0;
  for (std::size_t k = 0; k < cfg.samples; ++k) {
    Rng rng(derive_seed(cfg.seed, k));
    rng.shuffle(std::span<std::size_t>(tokens));
    PlayerSet before(game.num_positions());
    for (std::size_t p : tokens) {
      if (p == a) break;
      before |= game.block(p);
    }
    const PlayerSet with_a = before | game.block(a);
    const PlayerSet with_b = before | game.block(b);
    const PlayerSet with_both = with_a | game.block(b);
    total += game.evaluate_positions(with_both) - game.evaluate_positions(with_a) -
             game.evaluate_positions(with_b) + game.evaluate_positions(before);
    std::sort(tokens.begin(), tokens.end());
  }
  return 0.5 * total / static_cast<double>(cfg.samples);
}

double node_contribution(const GameContext& game, const TreeNode& node,
                         const Engine& engine) {
  return coalition_contribution(
      game, PlayerSet::range(game.num_players(), node.span.start, node.span.end),
      engine);
}

InteractionTree build_tree(const GameContext& game, const TreeRecipe& recipe,
                           const BuildOptions& options) {
  const std::size_t n = game.num_players();
  if (n < 2) throw ConfigError("a tree needs at least two players");
  if (!options.labels.empty() && options.labels.size() != n) {
    throw ConfigError("got " + std::to_string(options.labels.size()) +
                      " labels for " + std::to_string(n) + " players");
  }

  InteractionTree tree;
  tree.n = n;
  tree.strategy = recipe.strategy;
  tree.seed = recipe.seed;
  const Engine engine = recipe.resolve_engine(n);
  if (needs_engine(recipe)) {
    if (engine.is_exact() && n > kExactPlayerCap) {
      throw CapacityError("exact engine supports at most " +
                          std::to_string(kExactPlayerCap) + " players, got " +
                          std::to_string(n));
    }
    tree.engine = engine;
  }

  for (std::size_t i = 0; i < n; ++i) {
    TreeNode leaf;
    leaf.span = {i, i};
    leaf.label = options.labels.empty() ? std::to_string(i) : options.labels[i];
    tree.nodes.push_back(std::move(leaf));
  }

  std::vector<PlayerSet> frontier;
  std::vector<std::size_t> frontier_ids;
  for (std::size_t i = 0; i < n; ++i) {
    frontier.push_back(PlayerSet::of(n, {i}));
    frontier_ids.push_back(i);
  }

  InteractionAnalyzer analyzer(game, engine, 1);
  Rng rng(derive_seed(recipe.seed, 0x7261'6e64));
  try {
    const double value_scale =
        std::abs(game.evaluate(PlayerSet::full(n)) - game.baseline_score());
    for (std::size_t step = 1; step < n; ++step) {
      const std::size_t pairs = frontier.size() - 1;
      std::vector<double> keys(pairs, 0.0);
      std::vector<MergeCandidate> candidates;
      double scale = 1.0;

      switch (recipe.strategy) {
        case Strategy::kOurs:
          candidates.resize(pairs);
          parallel_for(pairs, options.workers, [&](std::size_t i) {
            candidates[i] = evaluate_candidate(analyzer, frontier, i);
          });
          for (std::size_t i = 0; i < pairs; ++i) keys[i] = candidates[i].r;
          break;
        case Strategy::kShapInteraction:
        case Strategy::kShapInteractionAbs: {
          std::vector<Coalition> blocks;
          for (const auto& f : frontier) blocks.push_back({f, {}});
          const GameContext reduced =
              game.reduce(CoalitionStructure(n, std::move(blocks)));
          const Engine step_engine =
              engine.is_exact()
                  ? engine
                  : engine.with_seed(derive_seed(engine.sampling.seed,
                                                 reduced.layout_hash()));
          parallel_for(pairs, options.workers, [&](std::size_t i) {
            keys[i] = shap_interaction_pair(reduced, i, i + 1, step_engine);
          });
          if (recipe.strategy == Strategy::kShapInteractionAbs) {
            for (double& k : keys) k = std::abs(k);
          }
          double key_scale = 0.0;
          for (double k : keys) key_scale = std::max(key_scale, std::abs(k));
          scale = std::max(value_scale, key_scale);
          break;
        }
        case Strategy::kRandom:
          for (double& k : keys) k = rng.uniform01();
          break;
        case Strategy::kLeftBranching:
          keys.front() = 1.0;
          break;
        case Strategy::kRightBranching:
          keys.back() = 1.0;
          break;
      }

      const std::size_t chosen = pick_leftmost_max(keys, scale);
      if (options.observer) {
        options.observer({step, &frontier, &keys, chosen, &analyzer});
      }

      const PlayerSet& left = frontier[chosen];
      const PlayerSet& right = frontier[chosen + 1];
      const PlayerSet merged = left | right;
      TreeNode node;
      node.span = span_of(merged);
      node.left = frontier_ids[chosen];
      node.right = frontier_ids[chosen + 1];
      node.merge_step = step;
      node.key = keys[chosen];
      node.label = tree.nodes[*node.left].label + " " + tree.nodes[*node.right].label;
      if (recipe.annotate) {
        NodeAnnotation a;
        a.interaction = analyzer.analyze(left, right);
        const MergeCandidate c = candidates.empty()
                                     ? evaluate_candidate(analyzer, frontier, chosen)
                                     : candidates[chosen];
        a.r = c.r;
        a.s = c.s;
        a.t = inter_ratio(a.interaction.psi);
        a.contribution = analyzer.contribution(merged);
        node.annotation = a;
      }
      tree.nodes.push_back(std::move(node));

      frontier[chosen] = merged;
      frontier_ids[chosen] = tree.nodes.size() - 1;
      frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(chosen) + 1);
      frontier_ids.erase(frontier_ids.begin() + static_cast<std::ptrdiff_t>(chosen) + 1);
    }
  } catch (const EvaluationError& e) {
    throw TreeBuildError(e.what(), tree);
  } catch (const BridgeError& e) {
    throw TreeBuildError(e.what(), tree);
  }
  return tree;
}

}  // namespace itree
