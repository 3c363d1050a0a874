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

#ifndef ITREE_SHAPLEY_HPP_
#define ITREE_SHAPLEY_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "itree/game.hpp"

namespace itree {

// Exact engines enumerate 2^n coalitions; this is the largest n accepted.
inline constexpr std::size_t kExactPlayerCap = 20;

struct SamplingConfig {
  std::size_t samples = 2000;  // permutations T
  std::uint64_t seed = 0;
  // Pair permutation 2k+1 with the reverse of permutation 2k.
  bool antithetic = false;
};

struct Engine {
  enum class Kind { kExact, kSampled };
  Kind kind = Kind::kExact;
  SamplingConfig sampling;

  static Engine exact() { return {}; }
  static Engine sampled(SamplingConfig config) {
    return {Kind::kSampled, config};
  }
  bool is_exact() const { return kind == Kind::kExact; }
  // Same engine with a different sampling seed.
  Engine with_seed(std::uint64_t seed) const;
  std::string name() const;
};

struct ShapleyEstimate {
  std::vector<double> values;
  Engine::Kind engine = Engine::Kind::kExact;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// Shapley weight |S|!(n-|S|-1)!/n! for a coalition of size s among n players.
double shapley_weight(std::size_t s, std::size_t n);

// One pass over all 2^n coalitions; throws CapacityError above the cap.
ShapleyEstimate exact_shapley(const GameContext& game);
// Shapley value of a single player by enumerating the other players' subsets.
double exact_shapley_of(const GameContext& game, std::size_t player);

// Permutation sampling. Permutation k draws from derive_seed(seed, k), so the
// result does not depend on `workers`.
ShapleyEstimate sampled_shapley(const GameContext& game,
                                const SamplingConfig& config,
                                std::size_t workers = 1);
double sampled_shapley_of(const GameContext& game, std::size_t player,
                          const SamplingConfig& config, std::size_t workers = 1);

ShapleyEstimate shapley(const GameContext& game, const Engine& engine,
                        std::size_t workers = 1);
double shapley_of(const GameContext& game, std::size_t player,
                  const Engine& engine, std::size_t workers = 1);

// 2||a - b|| / (||a|| + ||b||); 0 when both norms vanish.
double relative_distance(const std::vector<double>& a,
                         const std::vector<double>& b);

// Runs the engine twice with independent seeds and compares the two vectors.
// Only repeats == 2 is supported.
double instability(const GameContext& game, const Engine& engine,
                   std::size_t repeats = 2, std::size_t workers = 1);

}  // namespace itree

#endif  // ITREE_SHAPLEY_HPP_
