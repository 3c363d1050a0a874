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

#include "doctest.h"
#include "itree/boolean_models.hpp"
#include "itree/errors.hpp"
#include "itree/toy_models.hpp"
#include "itree/tree.hpp"
#include "itree/tree_builder.hpp"
#include "oracle.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace itree;

namespace {

TreeRecipe recipe_for(Strategy s, EngineChoice engine = EngineChoice::kExact) {
  TreeRecipe r;
  r.strategy = s;
  r.engine = engine;
  return r;
}

std::set<Span> internal_set(const InteractionTree& t) {
  const auto spans = t.internal_spans();
  return {spans.begin(), spans.end()};
}

void check_well_formed(const InteractionTree& t) {
  REQUIRE(t.nodes.size() == 2 * t.n - 1);
  for (std::size_t i = 0; i < t.n; ++i) {
    CHECK(t.nodes[i].is_leaf());
    CHECK(t.nodes[i].span == Span{i, i});
  }
  std::vector<int> parents(t.nodes.size(), 0);
  for (std::size_t id = t.n; id < t.nodes.size(); ++id) {
    const auto& node = t.nodes[id];
    REQUIRE_FALSE(node.is_leaf());
    CHECK(node.merge_step == id - t.n + 1);
    const auto& l = t.nodes[*node.left];
    const auto& r = t.nodes[*node.right];
    CHECK(*node.left < id);
    CHECK(*node.right < id);
    CHECK(l.span.end + 1 == r.span.start);
    CHECK(node.span == Span{l.span.start, r.span.end});
    ++parents[*node.left];
    ++parents[*node.right];
  }
  for (std::size_t id = 0; id + 1 < t.nodes.size(); ++id) CHECK(parents[id] == 1);
  CHECK(t.nodes[t.root()].span == Span{0, t.n - 1});
}

GameContext and_or_2x2() {
  return GameContext(std::make_shared<TwoLevelBooleanModel>(std::vector<std::size_t>{2, 2},
                                                            BoolOp::kAnd));
}

}  // namespace

TEST_CASE("two players give one annotated merge") {
  GameContext and2(std::make_shared<TabularModel>(and_game(2)));
  const auto t = build_tree(and2, recipe_for(Strategy::kOurs));
  check_well_formed(t);
  REQUIRE(t.nodes[2].annotation);
  CHECK(t.nodes[2].annotation->interaction.benefit == doctest::Approx(1.0));
  CHECK(t.nodes[2].annotation->contribution == doctest::Approx(1.0));
}

TEST_CASE("ours merges the two AND blocks first") {
  const auto game = and_or_2x2();
  const auto t = build_tree(game, recipe_for(Strategy::kOurs));
  check_well_formed(t);
  const std::set<Span> first_two = {t.nodes[4].span, t.nodes[5].span};
  CHECK(first_two == std::set<Span>{{0, 1}, {2, 3}});
}

TEST_CASE("branching baselines") {
  GameContext game(std::make_shared<TabularModel>(and_game(4)));
  CHECK(internal_set(build_tree(game, recipe_for(Strategy::kLeftBranching))) ==
        std::set<Span>{{0, 1}, {0, 2}, {0, 3}});
  CHECK(internal_set(build_tree(game, recipe_for(Strategy::kRightBranching))) ==
        std::set<Span>{{2, 3}, {1, 3}, {0, 3}});
}

TEST_CASE("ties go to the leftmost pair") {
  // Every density is zero in an additive game.
  GameContext additive(std::make_shared<ToyTextModel>(std::vector<double>{1, 2, 3, 4, 5}));
  const auto t = build_tree(additive, recipe_for(Strategy::kOurs));
  CHECK(internal_set(t) == std::set<Span>{{0, 1}, {0, 2}, {0, 3}, {0, 4}});
}

TEST_CASE("every strategy yields a well-formed binary tree") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 6;
    auto model = std::make_shared<TabularModel>(n, oracle::random_table(n, rng));
    GameContext game(model);
    for (Strategy s : {Strategy::kOurs, Strategy::kShapInteraction,
                       Strategy::kShapInteractionAbs, Strategy::kRandom,
                       Strategy::kLeftBranching, Strategy::kRightBranching}) {
      auto recipe = recipe_for(s);
      recipe.seed = static_cast<std::uint64_t>(trial);
      check_well_formed(build_tree(game, recipe));
    }
  }
}

TEST_CASE("between benefits of the nodes telescope to the root benefit") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto table = oracle::random_table(n, rng);
    GameContext game(std::make_shared<TabularModel>(n, table));
    const auto t = build_tree(game, recipe_for(Strategy::kOurs));
    double sum = 0;
    for (std::size_t id = n; id < t.nodes.size(); ++id) {
      sum += t.nodes[id].annotation->interaction.between;
    }
    const oracle::SetFn v = [&](std::uint64_t m) { return table[m]; };
    const std::uint64_t all = (std::uint64_t{1} << n) - 1;
    CHECK(std::abs(sum - oracle::benefit(v, all, all)) < 1e-9);
    CHECK(std::abs(t.nodes[t.root()].annotation->interaction.benefit - sum) < 1e-9);
  }
}

TEST_CASE("SHAP interaction values") {
  GameContext and2(std::make_shared<TabularModel>(and_game(2)));
  GameContext or2(std::make_shared<TabularModel>(or_game(2)));
  GameContext additive(std::make_shared<ToyTextModel>(std::vector<double>{1, 2, 3}));
  CHECK(shap_interaction_pair(and2, 0, 1, Engine::exact()) == doctest::Approx(0.5));
  CHECK(shap_interaction_pair(or2, 0, 1, Engine::exact()) == doctest::Approx(-0.5));
  CHECK(shap_interaction_pair(additive, 0, 2, Engine::exact()) == 0.0);
  CHECK_THROWS_AS(shap_interaction_pair(and2, 1, 1, Engine::exact()), ConfigError);

  std::mt19937_64 rng(14);
  const std::size_t n = 6;
  const auto table = oracle::random_table(n, rng);
  GameContext game(std::make_shared<TabularModel>(n, table));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      // Direct finite sum over subsets of the other players.
      long double expect = 0;
      const std::uint64_t pa = 1ull << a, pb = 1ull << b;
      for (std::uint64_t s = 0; s < (1ull << n); ++s) {
        if (s & (pa | pb)) continue;
        const int k = std::popcount(s);
        const long double w = oracle::factorial(k) * oracle::factorial(n - k - 2) /
                              (2 * oracle::factorial(n - 1));
        expect += w * (table[s | pa | pb] - table[s | pa] - table[s | pb] + table[s]);
      }
      const double got = shap_interaction_pair(game, a, b, Engine::exact());
      CHECK(std::abs(got - static_cast<double>(expect)) < 1e-12);
      CHECK(got == shap_interaction_pair(game, b, a, Engine::exact()));
      const double sampled =
          shap_interaction_pair(game, a, b, Engine::sampled({20000, 5, false}));
      CHECK(std::abs(sampled - got) < 0.05);
    }
  }
  GameContext wide(std::make_shared<ToyTextModel>(std::vector<double>(16, 1.0)));
  CHECK_THROWS_AS(shap_interaction_pair(wide, 0, 1, Engine::exact()), CapacityError);
}

TEST_CASE("node contributions") {
  GameContext additive(std::make_shared<ToyTextModel>(std::vector<double>{1, 2, 3, 4}));
  TreeNode node;
  node.span = {1, 2};
  CHECK(node_contribution(additive, node, Engine::exact()) == doctest::Approx(5.0));
  GameContext maj3(std::make_shared<TabularModel>(majority_game(3)));
  const oracle::SetFn v = [](std::uint64_t m) { return std::popcount(m) >= 2 ? 1.0 : 0.0; };
  node.span = {0, 1};
  CHECK(node_contribution(maj3, node, Engine::exact()) ==
        doctest::Approx(oracle::fused_phi(v, 4, 3)));
  node.span = {0, 2};
  CHECK(node_contribution(maj3, node, Engine::exact()) == doctest::Approx(1.0));
}

TEST_CASE("builds are deterministic across runs and workers") {
  std::mt19937_64 rng(15);
  const auto table = oracle::random_table(9, rng);
  auto model = std::make_shared<TabularModel>(9, table);
  for (EngineChoice engine : {EngineChoice::kExact, EngineChoice::kSampled}) {
    for (Strategy s : {Strategy::kOurs, Strategy::kShapInteraction, Strategy::kRandom}) {
      auto recipe = recipe_for(s, engine);
      recipe.samples = 200;
      recipe.seed = 99;
      std::string first;
      for (std::size_t workers : {1u, 3u, 8u}) {
        GameContext game(model);
        BuildOptions options;
        options.workers = workers;
        const auto json = tree_to_json(build_tree(game, recipe, options));
        if (first.empty()) first = json;
        CHECK(json == first);
      }
    }
  }
}

TEST_CASE("build errors") {
  GameContext one(std::make_shared<ToyTextModel>(std::vector<double>{1}));
  CHECK_THROWS_AS(build_tree(one, recipe_for(Strategy::kOurs)), ConfigError);
  GameContext big(std::make_shared<ToyTextModel>(std::vector<double>(21, 1.0)));
  CHECK_THROWS_AS(build_tree(big, recipe_for(Strategy::kOurs)), CapacityError);
  GameContext two(std::make_shared<TabularModel>(and_game(2)));
  BuildOptions options;
  options.labels = {"only one"};
  CHECK_THROWS_AS(build_tree(two, recipe_for(Strategy::kOurs), options), ConfigError);

  struct Failing : ValueModel {
    std::size_t num_players() const override { return 4; }
    double score(const PlayerSet&) const override { throw std::runtime_error("down"); }
  };
  GameContext failing(std::make_shared<Failing>());
  try {
    build_tree(failing, recipe_for(Strategy::kOurs));
    FAIL("expected TreeBuildError");
  } catch (const TreeBuildError& e) {
    CHECK(e.partial().n == 4);
    CHECK(e.partial().nodes.size() == 4);
  }
}

TEST_CASE("auto engine switches on the exact limit") {
  TreeRecipe r;
  r.exact_limit = 5;
  CHECK(r.resolve_engine(5).is_exact());
  CHECK_FALSE(r.resolve_engine(6).is_exact());
}

TEST_CASE("tree JSON round trip and renderings") {
  const auto game = and_or_2x2();
  BuildOptions options;
  options.labels = {"a", "b", "c", "d"};
  const auto t = build_tree(game, recipe_for(Strategy::kOurs), options);
  const auto text = tree_to_json(t, R"({"command":"explain"})");
  const auto back = tree_from_json(text);
  CHECK(back.n == 4);
  CHECK(internal_set(back) == internal_set(t));
  CHECK(back.nodes[4].label == t.nodes[4].label);
  CHECK(text.find("\"schema\": \"itree.tree/1\"") != std::string::npos);
  CHECK(text.find("\"psi_inter\"") != std::string::npos);

  const auto dot = tree_to_dot(t);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("n6 -> n") != std::string::npos);
  const auto ascii = tree_to_ascii(t);
  CHECK(ascii.rfind("[0-3] a b c d", 0) == 0);
  CHECK(ascii.find("`-- ") != std::string::npos);

  const auto minimal = tree_from_json(
      R"({"schema":"itree.tree/1","n":3,"nodes":[{"span":[0,1]},{"span":[0,2]}]})");
  CHECK(internal_set(minimal) == std::set<Span>{{0, 1}, {0, 2}});
  CHECK_THROWS_AS(tree_from_json("{}"), SchemaError);
  CHECK_THROWS_AS(tree_from_json("[1,2"), SchemaError);
  CHECK_THROWS_AS(tree_from_json(R"({"schema":"itree.tree/1","n":2,"nodes":[{"span":[0,2]}]})"),
                  SchemaError);
  CHECK_THROWS_AS(tree_from_json(R"({"schema":"itree.tree/1","n":2,"nodes":[]})"),
                  SchemaError);
  CHECK(parse_strategy("si-abs") == Strategy::kShapInteractionAbs);
  CHECK_THROWS_AS(parse_strategy("hedge"), ConfigError);
}
