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

#include "itree/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "itree/errors.hpp"
#include "itree/parallel.hpp"
#include "itree/rng.hpp"

namespace itree {
namespace {

// Permutations per accumulation chunk. Chunk partials are merged in chunk
// order, which keeps sums independent of the worker count.
constexpr std::size_t kChunk = 64;

void check_exact_cap(const GameContext& game) {
  if (game.num_players() > kExactPlayerCap) {
    throw CapacityError("exact Shapley engine supports at most " +
                        std::to_string(kExactPlayerCap) + " players, got " +
                        std::to_string(game.num_players()));
  }
}

long double binomial(std::size_t n, std::size_t k) {
  long double c = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<long double>(n - k + i) / i;
  return c;
}

// v over every coalition of the game's players, indexed by player bit mask.
std::vector<double> value_table(const GameContext& game) {
  const std::size_t m = game.num_players();
  std::vector<double> values(std::size_t{1} << m);
  for (std::uint64_t mask = 0; mask < values.size(); ++mask) {
    values[mask] = game.fast_path()
                       ? game.evaluate_bits(mask)
                       : game.evaluate(PlayerSet::from_bits(m, mask));
  }
  return values;
}

std::vector<std::size_t> draw_permutation(std::size_t m, std::uint64_t seed,
                                          std::size_t k, bool antithetic) {
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  const std::size_t base = antithetic ? k - k % 2 : k;
  Rng rng(derive_seed(seed, base));
  rng.shuffle(std::span<std::size_t>(perm));
  if (antithetic && k % 2 == 1) std::reverse(perm.begin(), perm.end());
  return perm;
}

void check_samples(const SamplingConfig& config) {
  if (config.samples == 0) throw ConfigError("sampling needs T >= 1");
}

}  // namespace

Engine Engine::with_seed(std::uint64_t seed) const {
  Engine e = *this;
  e.sampling.seed = seed;
  return e;
}

std::string Engine::name() const { return is_exact() ? "exact" : "sampled"; }

double shapley_weight(std::size_t s, std::size_t n) {
  // 1 / (n * C(n-1, s))
  double binom = 1.0;
  const std::size_t k = std::min(s, n - 1 - s);
  for (std::size_t i = 1; i <= k; ++i) {
    binom = binom * static_cast<double>(n - k - 1 + i) / static_cast<double>(i);
  }
  return 1.0 / (static_cast<double>(n) * binom);
}

ShapleyEstimate exact_shapley(const GameContext& game) {
  check_exact_cap(game);
  const std::size_t m = game.num_players();
  const std::vector<double> values = value_table(game);
  // Marginals are summed per coalition size in extended precision and then
  // averaged, so constant marginals come back exactly.
  std::vector<long double> sums(m * m, 0.0L);
  for (std::uint64_t mask = 0; mask < values.size(); ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size == m) continue;
    for (std::size_t a = 0; a < m; ++a) {
      const std::uint64_t bit = std::uint64_t{1} << a;
      if (mask & bit) continue;
      sums[a * m + size] += values[mask | bit] - values[mask];
    }
  }
  std::vector<double> phi(m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    long double total = 0.0L;
    for (std::size_t size = 0; size < m; ++size) {
      total += sums[a * m + size] / binomial(m - 1, size);
    }
    phi[a] = static_cast<double>(total / m);
  }
  return {std::move(phi), Engine::Kind::kExact, 0, 0};
}

double exact_shapley_of(const GameContext& game, std::size_t player) {
  check_exact_cap(game);
  const std::size_t m = game.num_players();
  if (player >= m) throw ConfigError("player index out of range");
  const std::uint64_t bit = std::uint64_t{1} << player;
  const std::uint64_t others = ((std::uint64_t{1} << m) - 1) & ~bit;
  auto v = [&](std::uint64_t mask) {
    return game.fast_path() ? game.evaluate_bits(mask)
                            : game.evaluate(PlayerSet::from_bits(m, mask));
  };
  std::vector<long double> sums(m, 0.0L);
  // Enumerate submasks of `others` in increasing order.
  std::uint64_t t = 0;
  while (true) {
    sums[std::popcount(t)] += v(t | bit) - v(t);
    if (t == others) break;
    t = (t - others) & others;
  }
  long double total = 0.0L;
  for (std::size_t size = 0; size < m; ++size) total += sums[size] / binomial(m - 1, size);
  const double phi = static_cast<double>(total / m);
  return phi;
}

ShapleyEstimate sampled_shapley(const GameContext& game,
                                const SamplingConfig& config,
                                std::size_t workers) {
  check_samples(config);
  const std::size_t m = game.num_players();
  const std::size_t chunks = (config.samples + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(m, 0.0));
  const double base = game.baseline_score();

  parallel_for(chunks, workers, [&](std::size_t c) {
    auto& sums = partial[c];
    const std::size_t end = std::min(config.samples, (c + 1) * kChunk);
    for (std::size_t k = c * kChunk; k < end; ++k) {
      const auto perm = draw_permutation(m, config.seed, k, config.antithetic);
      PlayerSet positions(game.num_positions());
      double prev = base;
      for (std::size_t p : perm) {
        positions |= game.block(p);
        const double cur = game.evaluate_positions(positions);
        sums[p] += cur - prev;
        prev = cur;
      }
    }
  });

  std::vector<double> phi(m, 0.0);
  for (const auto& sums : partial) {
    for (std::size_t a = 0; a < m; ++a) phi[a] += sums[a];
  }
  for (double& x : phi) x /= static_cast<double>(config.samples);
  return {std::move(phi), Engine::Kind::kSampled, config.samples, config.seed};
}

double sampled_shapley_of(const GameContext& game, std::size_t player,
                          const SamplingConfig& config, std::size_t workers) {
  check_samples(config);
  const std::size_t m = game.num_players();
  if (player >= m) throw ConfigError("player index out of range");
  const std::size_t chunks = (config.samples + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);

  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::size_t end = std::min(config.samples, (c + 1) * kChunk);
    for (std::size_t k = c * kChunk; k < end; ++k) {
      const auto perm = draw_permutation(m, config.seed, k, config.antithetic);
      PlayerSet positions(game.num_positions());
      for (std::size_t p : perm) {
        if (p == player) break;
        positions |= game.block(p);
      }
      const double before = game.evaluate_positions(positions);
      positions |= game.block(player);
      partial[c] += game.evaluate_positions(positions) - before;
    }
  });

  double total = 0.0;
  for (double x : partial) total += x;
  return total / static_cast<double>(config.samples);
}

ShapleyEstimate shapley(const GameContext& game, const Engine& engine,
                        std::size_t workers) {
  if (engine.is_exact()) return exact_shapley(game);
  return sampled_shapley(game, engine.sampling, workers);
}

double shapley_of(const GameContext& game, std::size_t player,
                  const Engine& engine, std::size_t workers) {
  if (engine.is_exact()) return exact_shapley_of(game, player);
  return sampled_shapley_of(game, player, engine.sampling, workers);
}

double relative_distance(const std::vector<double>& a,
                         const std::vector<double>& b) {
  if (a.size() != b.size()) throw ConfigError("vector lengths differ");
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double denom = std::sqrt(na) + std::sqrt(nb);
  if (denom == 0.0) return 0.0;
  return 2.0 * std::sqrt(diff) / denom;
}

double instability(const GameContext& game, const Engine& engine,
                   std::size_t repeats, std::size_t workers) {
  if (repeats != 2) {
    throw ConfigError("instability compares exactly two repeated estimates");
  }
  const std::uint64_t seed = engine.sampling.seed;
  const auto first = shapley(game, engine.with_seed(derive_seed(seed, 1)), workers);
  const auto second = shapley(game, engine.with_seed(derive_seed(seed, 2)), workers);
  return relative_distance(first.values, second.values);
}

}  // namespace itree
