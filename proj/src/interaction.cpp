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

#include "itree/interaction.hpp"

#include <string>

#include "itree/errors.hpp"
#include "itree/parallel.hpp"
#include "itree/rng.hpp"

namespace itree {
namespace {

void check_coalition(const GameContext& game, const PlayerSet& s) {
  if (s.universe_size() != game.num_players()) {
    throw ConfigError("coalition is over " + std::to_string(s.universe_size()) +
                      " players but the game has " +
                      std::to_string(game.num_players()));
  }
  if (s.empty()) throw ConfigError("coalition must be non-empty");
}

void check_split(const GameContext& game, const PlayerSet& first,
                 const PlayerSet& second) {
  check_coalition(game, first);
  check_coalition(game, second);
  if (first.intersects(second)) {
    throw ConfigError("split halves must be disjoint");
  }
}

// Every reduced game gets its own sampling stream keyed by its layout, so the
// same reduced game always yields the same estimate.
Engine engine_for(const GameContext& reduced, const Engine& engine) {
  if (engine.is_exact()) return engine;
  return engine.with_seed(derive_seed(engine.sampling.seed, reduced.layout_hash()));
}

// phi of `fused` in the game whose players are `others` (singletons) and
// `fused` as one player; everything else is masked.
double fused_contribution(const GameContext& game, const PlayerSet& others,
                          const PlayerSet& fused, const Engine& engine,
                          std::size_t workers) {
  const auto structure = CoalitionStructure::fuse(others, fused);
  const GameContext reduced = game.reduce(structure);
  return shapley_of(reduced, structure.block_of(fused.first()),
                    engine_for(reduced, engine), workers);
}

// The per-member terms of B([S]), each in the game (N \ S) u {a}.
double solo_sum(const GameContext& game, const PlayerSet& coalition,
                const Engine& engine, std::size_t workers) {
  const PlayerSet others = coalition.complement();
  const auto members = coalition.members();
  std::vector<double> terms(members.size());
  parallel_for(members.size(), workers, [&](std::size_t k) {
    terms[k] = fused_contribution(
        game, others, PlayerSet::of(game.num_players(), {members[k]}), engine, 1);
  });
  double total = 0.0;
  for (double t : terms) total += t;
  return total;
}

}  // namespace

double coalition_contribution(const GameContext& game,
                              const PlayerSet& coalition, const Engine& engine) {
  check_coalition(game, coalition);
  return fused_contribution(game, coalition.complement(), coalition, engine, 1);
}

double interaction_benefit(const GameContext& game, const PlayerSet& coalition,
                           const Engine& engine) {
  InteractionAnalyzer analyzer(game, engine);
  return analyzer.benefit(coalition);
}

double between_benefit(const GameContext& game, const PlayerSet& first,
                       const PlayerSet& second, const Engine& engine) {
  InteractionAnalyzer analyzer(game, engine);
  return analyzer.between(first, second);
}

PsiTerms psi_decomposition(const GameContext& game, const PlayerSet& first,
                           const PlayerSet& second, const Engine& engine) {
  InteractionAnalyzer analyzer(game, engine);
  return analyzer.psi(first, second);
}

double ElementaryComponents::at(const PlayerSet& subset) const {
  std::size_t local = 0;
  std::size_t matched = 0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (subset.contains(members[k])) {
      local |= std::size_t{1} << k;
      ++matched;
    }
  }
  if (matched != subset.count()) {
    throw ConfigError("subset is not contained in the analysed coalition");
  }
  return values[local];
}

ElementaryComponents elementary_components(const GameContext& game,
                                           const PlayerSet& coalition,
                                           const Engine& engine) {
  check_coalition(game, coalition);
  if (coalition.count() > kMaxComponentCoalition) {
    throw CapacityError("elementary components support coalitions of at most " +
                        std::to_string(kMaxComponentCoalition) + " players");
  }
  ElementaryComponents out;
  out.universe_size = game.num_players();
  out.members = coalition.members();
  const std::size_t k = out.members.size();
  const PlayerSet outside = coalition.complement();
  out.values.assign(std::size_t{1} << k, 0.0);

  // I(L) = phi([L]) - sum over non-empty proper subsets L' of I(L'); the
  // outside players stay the same at every level of the recursion.
  for (std::size_t mask = 1; mask < out.values.size(); ++mask) {
    PlayerSet fused(game.num_players());
    for (std::size_t b = 0; b < k; ++b) {
      if ((mask >> b) & 1) fused.insert(out.members[b]);
    }
    double value = fused_contribution(game, outside, fused, engine, 1);
    for (std::size_t sub = (mask - 1) & mask; sub != 0; sub = (sub - 1) & mask) {
      value -= out.values[sub];
    }
    out.values[mask] = value;
  }
  return out;
}

InteractionAnalyzer::InteractionAnalyzer(const GameContext& game, Engine engine,
                                         std::size_t workers)
    : game_(game), engine_(engine), workers_(workers) {}

double InteractionAnalyzer::contribution(const PlayerSet& coalition) {
  check_coalition(game_, coalition);
  {
    std::lock_guard lock(mutex_);
    auto it = contributions_.find(coalition);
    if (it != contributions_.end()) return it->second;
  }
  const double value = fused_contribution(game_, coalition.complement(),
                                          coalition, engine_, workers_);
  std::lock_guard lock(mutex_);
  contributions_.try_emplace(coalition, value);
  return value;
}

double InteractionAnalyzer::benefit(const PlayerSet& coalition) {
  check_coalition(game_, coalition);
  {
    std::lock_guard lock(mutex_);
    auto it = benefits_.find(coalition);
    if (it != benefits_.end()) return it->second;
  }
  const double value =
      contribution(coalition) - solo_sum(game_, coalition, engine_, workers_);
  std::lock_guard lock(mutex_);
  benefits_.try_emplace(coalition, value);
  return value;
}

double InteractionAnalyzer::between(const PlayerSet& first,
                                    const PlayerSet& second) {
  check_split(game_, first, second);
  return benefit(first | second) - benefit(first) - benefit(second);
}

PsiTerms InteractionAnalyzer::psi(const PlayerSet& first,
                                  const PlayerSet& second) {
  return analyze(first, second).psi;
}

InteractionResult InteractionAnalyzer::analyze(const PlayerSet& first,
                                               const PlayerSet& second) {
  check_split(game_, first, second);
  InteractionResult r;
  r.benefit = benefit(first | second);
  r.benefit_first = benefit(first);
  r.benefit_second = benefit(second);
  r.between = r.benefit - r.benefit_first - r.benefit_second;

  // B of one side once the other side is removed from the game.
  auto benefit_without = [&](const PlayerSet& side, const PlayerSet& removed) {
    const PlayerSet keep = removed.complement();
    const GameContext restricted = game_.restrict_to(keep);
    InteractionAnalyzer inner(restricted, engine_, workers_);
    return inner.benefit(side.compress(keep));
  };
  r.psi.intra_first = benefit_without(first, second) - r.benefit_first;
  r.psi.intra_second = benefit_without(second, first) - r.benefit_second;
  r.psi.inter = r.between - r.psi.intra_first - r.psi.intra_second;
  return r;
}

}  // namespace itree
