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
#include "itree/errors.hpp"
#include "itree/evaluation.hpp"
#include "itree/toy_models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

using namespace itree;

namespace {

SpanSet spans(std::size_t n, std::vector<Span> s) { return SpanSet::from_spans(n, s); }

// Mean score drop over every sequence of insertion slots, by enumeration.
double enumerate_cohesion(const std::vector<double>& weights, const std::vector<PairBonus>& bonuses,
                          Span span) {
  const std::size_t n = weights.size();
  auto score = [&](const std::vector<std::size_t>& order) {
    std::vector<std::size_t> slot(n);
    for (std::size_t k = 0; k < n; ++k) slot[order[k]] = k;
    double v = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (const auto& b : bonuses) {
      if (static_cast<long>(slot[b.second]) - static_cast<long>(slot[b.first]) ==
          static_cast<long>(b.second - b.first)) {
        v += b.value;
      }
    }
    return v;
  };
  std::vector<std::size_t> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  const double base = score(identity);
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < span.start || i > span.end) rest.push_back(i);
  }
  double total = 0;
  std::size_t count = 0;
  std::function<void(std::vector<std::size_t>, std::size_t)> go =
      [&](std::vector<std::size_t> seq, std::size_t word) {
        if (word > span.end) {
          total += base - score(seq);
          ++count;
          return;
        }
        for (std::size_t pos = 0; pos <= seq.size(); ++pos) {
          auto next = seq;
          next.insert(next.begin() + static_cast<long>(pos), word);
          go(next, word + 1);
        }
      };
  go(rest, span.start);
  return total / static_cast<double>(count);
}

}  // namespace

TEST_CASE("unlabeled F1 arithmetic") {
  const auto truth = spans(6, {{0, 1}, {2, 4}, {0, 5}});
  const auto same = unlabeled_f1(truth, truth);
  CHECK(same.f1 == 1.0);
  CHECK(same.recall == 1.0);
  CHECK(same.precision == 1.0);
  // The full span is left out by default, so only {0,1} and {2,4} count.
  const auto pred = spans(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  const auto s = unlabeled_f1(pred, truth);
  CHECK(s.precision == doctest::Approx(0.25));
  CHECK(s.recall == doctest::Approx(0.5));
  CHECK(s.f1 == doctest::Approx(2 * 0.25 * 0.5 / 0.75));
  const auto disjoint = unlabeled_f1(spans(6, {{3, 4}}), truth);
  CHECK(disjoint.f1 == 0.0);
  CHECK(disjoint.recall == 0.0);
  CHECK_THROWS_AS(unlabeled_f1(spans(5, {}), truth), ConfigError);
  CHECK_THROWS_AS(spans(3, {{1, 3}}), ConfigError);

  SpanConvention with_root{true};
  const auto wr = unlabeled_f1(SpanSet::from_spans(6, {{0, 5}, {3, 4}}, with_root),
                               SpanSet::from_spans(6, {{0, 5}, {0, 1}}, with_root));
  CHECK(wr.f1 == doctest::Approx(0.5));
  CHECK(spans(4, {{1, 1}, {2, 2}}).spans.empty());
}

TEST_CASE("precision and recall swap with the arguments") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Span> a, b;
    for (std::size_t s = 0; s < 8; ++s) {
      for (std::size_t e = s + 1; e < 8; ++e) {
        if (rng() % 5 == 0) a.push_back({s, e});
        if (rng() % 5 == 0) b.push_back({s, e});
      }
    }
    const auto ab = unlabeled_f1(spans(8, a), spans(8, b));
    const auto ba = unlabeled_f1(spans(8, b), spans(8, a));
    CHECK(ab.precision == ba.recall);
    CHECK(ab.f1 == ba.f1);
  }
}

TEST_CASE("small suite experiment") {
  SuiteOptions o;
  o.n_vars = 5;
  const auto suite = generate_andor_suite(o);
  std::vector<TreeRecipe> recipes;
  for (Strategy s : {Strategy::kOurs, Strategy::kShapInteraction, Strategy::kRandom,
                     Strategy::kLeftBranching}) {
    TreeRecipe r;
    r.strategy = s;
    r.engine = EngineChoice::kExact;
    r.annotate = false;
    recipes.push_back(r);
  }
  ExperimentOptions options;
  options.random_seeds = 4;
  options.seed = 17;
  const auto report = run_andor_experiment(suite, recipes, options);
  options.workers = 4;
  const auto parallel = run_andor_experiment(suite, recipes, options);
  CHECK(report_to_json(report) == report_to_json(parallel));
  CHECK(report_to_csv(report) == report_to_csv(parallel));
  REQUIRE(report.rows.size() == 4);
  CHECK(report.models == 32);
  CHECK(report.rows[0].name == "ours");

  // Left-branching spans {0..k} against each truth, counted directly.
  double lb_sum[2] = {0, 0};
  for (std::size_t i = 0; i < suite.size(); ++i) {
    std::size_t truth = 0, hit = 0;
    for (const Span& s : suite[i].truth.spans) {
      if (s.length() < 2 || s.length() == 5) continue;
      ++truth;
      if (s.start == 0) ++hit;
    }
    const double f1 = hit == 0 ? 0.0 : 2.0 * hit / (3.0 + truth);
    lb_sum[i < 16 ? 0 : 1] += f1;
  }
  CHECK(report.rows[3].and_or.f1 == doctest::Approx(lb_sum[0] / 16));
  CHECK(report.rows[3].average.f1 ==
        doctest::Approx((lb_sum[0] + lb_sum[1]) / 32));

  // Ours predicts n-2 non-root spans, never fewer than the truth has.
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(report.rows[0].per_model[i].recall >= report.rows[0].per_model[i].f1);
  }
  CHECK(report.rows[1].or_and.f1 == 0.0);
  CHECK(report_summary(report).find("si") != std::string::npos);
}

TEST_CASE("scatter keeps the other words in order") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto order = scatter_span(7, {2, 4}, rng);
    std::vector<std::size_t> sorted(order);
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> identity(7);
    std::iota(identity.begin(), identity.end(), 0);
    CHECK(sorted == identity);
    std::vector<std::size_t> rest;
    for (std::size_t p : order) {
      if (p < 2 || p > 4) rest.push_back(p);
    }
    CHECK(rest == std::vector<std::size_t>{0, 1, 5, 6});
  }
  Rng a(9), b(9);
  CHECK(scatter_span(6, {0, 5}, a) == scatter_span(6, {0, 5}, b));
  CHECK_THROWS_AS(scatter_span(3, {1, 3}, a), ConfigError);
}

TEST_CASE("cohesion node selection") {
  GameContext two(std::make_shared<TabularModel>(and_game(2)));
  TreeRecipe r;
  CHECK(select_cohesion_node(build_tree(two, r)) == 2);
  auto toy = std::make_shared<ToyTextModel>(std::vector<double>{0.1, 0.1, 0.1, 0.1},
                                            std::vector<PairBonus>{{2, 3, 2.0}});
  GameContext game(toy);
  const auto t = build_tree(game, r);
  CHECK(t.nodes[select_cohesion_node(t)].span == Span{2, 3});
  r.annotate = false;
  CHECK_THROWS_AS(select_cohesion_node(build_tree(game, r)), ConfigError);
}

TEST_CASE("cohesion is zero on order-invariant models") {
  auto toy = std::make_shared<ToyTextModel>(std::vector<double>{0.3, -1, 2, 0.7, 1.1});
  CohesionConfig config;
  config.engine = Engine::exact();
  config.seed = 5;
  const auto result = cohesion_score({{toy, toy}, {toy, toy}}, config);
  CHECK(result.score == 0.0);
  CHECK(result.sentences[0].stddev_drop == 0.0);
}

TEST_CASE("cohesion matches the enumerated expectation") {
  struct Case {
    std::vector<double> weights;
    std::vector<PairBonus> bonuses;
  };
  const std::vector<Case> cases = {
      {{0.1, 0.2, 0.1, 0.3}, {{1, 2, 1.5}}},
      {{0, 0, 0, 0, 0}, {{0, 1, 1.0}}},
      {{0.5, -0.2, 0.1, 0.4, 0.0, 0.2}, {{3, 4, 2.0}, {0, 1, 0.3}}},
      {{1, 1, 1}, {{1, 2, 0.8}}},
  };
  for (const auto& c : cases) {
    auto toy = std::make_shared<ToyTextModel>(c.weights, c.bonuses);
    CohesionConfig config;
    config.engine = Engine::exact();
    config.seed = 21;
    const auto result = cohesion_score({{toy, toy}}, config);
    const auto& s = result.sentences[0];
    const double expect = enumerate_cohesion(c.weights, c.bonuses, s.selected);
    CHECK(result.score > 0.0);
    const double sigma = s.stddev_drop / std::sqrt(100.0);
    CHECK(std::abs(s.mean_drop - expect) <= 3 * sigma + 1e-12);
    CHECK(cohesion_score({{toy, toy}}, config).score == result.score);
    config.workers = 3;
    CHECK(cohesion_score({{toy, toy}}, config).score == result.score);
  }
}

TEST_CASE("cohesion rejects single words and missing scorers") {
  auto one = std::make_shared<ToyTextModel>(std::vector<double>{1});
  CHECK_THROWS_AS(cohesion_score({{one, one}}, {}), ConfigError);
  auto table = std::make_shared<TabularModel>(and_game(3));
  CHECK_THROWS_AS(cohesion_score({{table, nullptr}}, {}), ConfigError);
  CHECK_THROWS_AS(cohesion_score({}, {}), ConfigError);
}

TEST_CASE("instability curves") {
  GameContext and2(std::make_shared<TabularModel>(and_game(2)));
  for (const auto& p : instability_curve(and2, {10, 100, 1000}, 5, Engine::exact())) {
    CHECK(p.mean_instability == 0.0);
  }
  GameContext additive(std::make_shared<ToyTextModel>(std::vector<double>{1, 2, -3}));
  for (const auto& p :
       instability_curve(additive, {10, 100}, 5, Engine::sampled({1, 3, false}))) {
    CHECK(p.mean_instability == 0.0);
  }
  const auto curve = instability_curve(and2, {10, 100, 1000}, 20, Engine::sampled({1, 7, false}), 3);
  CHECK(curve[0].mean_instability > curve[1].mean_instability);
  CHECK(curve[1].mean_instability > curve[2].mean_instability);
  CHECK(instability_curve(and2, {10, 100, 1000}, 20, Engine::sampled({1, 7, false}), 1)[2]
            .mean_instability == curve[2].mean_instability);
}

TEST_CASE("non-adjacency audit") {
  std::vector<GameContext> adjacent;
  adjacent.emplace_back(std::make_shared<ToyTextModel>(
      std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6},
      std::vector<PairBonus>{{0, 1, 2.0}, {3, 4, 1.0}}));
  adjacent.emplace_back(std::make_shared<ToyTextModel>(
      std::vector<double>{1, 1, 1, 1, 1, 1, 1}, std::vector<PairBonus>{{2, 3, -3.0}}));
  adjacent.emplace_back(std::make_shared<ToyTextModel>(std::vector<double>{1, 2, 3, 4, 5, 6}));
  TreeRecipe recipe;
  recipe.engine = EngineChoice::kExact;
  const auto ok = nonadjacency_audit(adjacent, recipe);
  REQUIRE(ok.rate.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(ok.rate[k] == 0.0);
    CHECK(ok.sentences[k] == 3);
  }

  std::vector<GameContext> planted;
  planted.emplace_back(std::make_shared<ToyTextModel>(
      std::vector<double>{0.1, 0.1, 0.1, 0.1, 0.1, 0.1},
      std::vector<PairBonus>{{0, 3, 5.0}, {1, 2, 0.2}}));
  const auto bad = nonadjacency_audit(planted, recipe, 3);
  CHECK(bad.rate[0] == 1.0);

  std::vector<GameContext> short_games;
  short_games.emplace_back(std::make_shared<TabularModel>(and_game(3)));
  const auto s = nonadjacency_audit(short_games, recipe);
  CHECK(s.sentences[0] == 1);
  CHECK(s.sentences[2] == 0);
  CHECK(s.rate[2] == 0.0);
}
