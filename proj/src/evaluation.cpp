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

#include "itree/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>

#include "itree/errors.hpp"
#include "itree/metrics.hpp"
#include "itree/parallel.hpp"
#include "json.hpp"

namespace itree {

using nlohmann::json;

namespace {

// r' must beat the chosen r by more than float noise to count as a miss.
constexpr double kAuditTolerance = 1e-9;

F1Score mean_of(const std::vector<F1Score>& scores) {
  F1Score m;
  if (scores.empty()) return m;
  for (const auto& s : scores) {
    m.f1 += s.f1;
    m.recall += s.recall;
    m.precision += s.precision;
  }
  const double k = static_cast<double>(scores.size());
  m.f1 /= k;
  m.recall /= k;
  m.precision /= k;
  return m;
}

std::string pct(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * x);
  return buf;
}

std::string fixed6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

EngineChoice choice_of(const Engine& engine) {
  return engine.is_exact() ? EngineChoice::kExact : EngineChoice::kSampled;
}

}  // namespace

SpanSet SpanSet::from_spans(std::size_t n, const std::vector<Span>& spans,
                            const SpanConvention& convention) {
  SpanSet out{n, {}};
  for (const Span& s : spans) {
    if (s.start > s.end || s.end >= n) {
      throw ConfigError("span outside [0, n-1]");
    }
    if (s.length() < 2) continue;
    if (!convention.include_full_span && s.start == 0 && s.end == n - 1) continue;
    out.spans.insert(s);
  }
  return out;
}

SpanSet SpanSet::from_tree(const InteractionTree& tree,
                           const SpanConvention& convention) {
  return from_spans(tree.n, tree.internal_spans(), convention);
}

SpanSet SpanSet::from_truth(const GroundTruthTree& truth,
                            const SpanConvention& convention) {
  return from_spans(truth.n, truth.spans, convention);
}

F1Score unlabeled_f1(const SpanSet& predicted, const SpanSet& truth) {
  if (predicted.n != truth.n) {
    throw ConfigError("span sets cover different lengths (" +
                      std::to_string(predicted.n) + " vs " +
                      std::to_string(truth.n) + ")");
  }
  if (predicted.spans.empty() && truth.spans.empty()) return {1.0, 1.0, 1.0};
  std::size_t common = 0;
  for (const Span& s : predicted.spans) common += truth.spans.count(s);
  if (common == 0) return {};
  F1Score out;
  out.precision = static_cast<double>(common) / predicted.spans.size();
  out.recall = static_cast<double>(common) / truth.spans.size();
  out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

SuiteReport run_andor_experiment(const std::vector<SuiteEntry>& suite,
                                 const std::vector<TreeRecipe>& recipes,
                                 const ExperimentOptions& options) {
  SuiteReport report;
  report.models = suite.size();
  report.n_vars = suite.empty() ? 0 : suite.front().model.num_players();
  report.random_seeds = options.random_seeds;
  if (options.random_seeds == 0) throw ConfigError("random baseline needs >= 1 seed");

  std::vector<std::vector<F1Score>> scores(recipes.size(),
                                           std::vector<F1Score>(suite.size()));
  parallel_for(suite.size(), options.workers, [&](std::size_t i) {
    const auto& entry = suite[i];
    const GameContext game(std::make_shared<TwoLevelBooleanModel>(entry.model));
    const SpanSet truth = SpanSet::from_truth(entry.truth, options.convention);
    const std::uint64_t model_seed = derive_seed(options.seed, i);
    for (std::size_t r = 0; r < recipes.size(); ++r) {
      TreeRecipe recipe = recipes[r];
      const std::size_t repeats =
          recipe.strategy == Strategy::kRandom ? options.random_seeds : 1;
      std::vector<F1Score> runs;
      for (std::size_t s = 0; s < repeats; ++s) {
        recipe.seed = derive_seed(model_seed, s);
        const InteractionTree tree = build_tree(game, recipe);
        runs.push_back(
            unlabeled_f1(SpanSet::from_tree(tree, options.convention), truth));
      }
      scores[r][i] = mean_of(runs);
    }
  });

  for (std::size_t r = 0; r < recipes.size(); ++r) {
    RecipeReport row;
    row.name = to_string(recipes[r].strategy);
    row.per_model = scores[r];
    std::vector<F1Score> and_or, or_and;
    for (std::size_t i = 0; i < suite.size(); ++i) {
      (suite[i].model.level1() == BoolOp::kAnd ? and_or : or_and)
          .push_back(scores[r][i]);
    }
    row.and_or = mean_of(and_or);
    row.or_and = mean_of(or_and);
    if (and_or.empty()) {
      row.average = row.or_and;
    } else if (or_and.empty()) {
      row.average = row.and_or;
    } else {
      row.average = {(row.and_or.f1 + row.or_and.f1) / 2,
                     (row.and_or.recall + row.or_and.recall) / 2,
                     (row.and_or.precision + row.or_and.precision) / 2};
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string report_to_csv(const SuiteReport& report) {
  std::ostringstream out;
  out << "recipe,f1_and_or,f1_or_and,f1_avg,recall_and_or,recall_or_and,"
         "recall_avg,precision_and_or,precision_or_and,precision_avg\n";
  for (const auto& row : report.rows) {
    out << row.name << ',' << fixed6(row.and_or.f1) << ','
        << fixed6(row.or_and.f1) << ',' << fixed6(row.average.f1) << ','
        << fixed6(row.and_or.recall) << ',' << fixed6(row.or_and.recall) << ','
        << fixed6(row.average.recall) << ',' << fixed6(row.and_or.precision)
        << ',' << fixed6(row.or_and.precision) << ','
        << fixed6(row.average.precision) << '\n';
  }
  return out.str();
}

std::string report_to_json(const SuiteReport& report, const std::string& config) {
  auto score_json = [](const F1Score& s) {
    return json{{"f1", s.f1}, {"recall", s.recall}, {"precision", s.precision}};
  };
  json rows = json::array();
  for (const auto& row : report.rows) {
    json per_model = json::array();
    for (const auto& s : row.per_model) {
      per_model.push_back({s.f1, s.recall, s.precision});
    }
    rows.push_back({{"recipe", row.name},
                    {"and_or", score_json(row.and_or)},
                    {"or_and", score_json(row.or_and)},
                    {"average", score_json(row.average)},
                    {"per_model", per_model}});
  }
  json doc = {{"schema", "itree.suite_report/1"}};
  if (!config.empty()) doc["config"] = json::parse(config);
  doc["n_vars"] = report.n_vars;
  doc["models"] = report.models;
  doc["random_seeds"] = report.random_seeds;
  doc["per_model_columns"] = {"f1", "recall", "precision"};
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string report_summary(const SuiteReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-8s | %8s %8s %8s | %8s %8s %8s\n", "",
                "F1", "", "", "Recall", "", "");
  out << line;
  std::snprintf(line, sizeof line, "%-8s | %8s %8s %8s | %8s %8s %8s\n",
                "method", "AND-OR", "OR-AND", "Avg.", "AND-OR", "OR-AND", "Avg.");
  out << line;
  for (const auto& row : report.rows) {
    std::snprintf(line, sizeof line, "%-8s | %8s %8s %8s | %8s %8s %8s\n",
                  row.name.c_str(), pct(row.and_or.f1).c_str(),
                  pct(row.or_and.f1).c_str(), pct(row.average.f1).c_str(),
                  pct(row.and_or.recall).c_str(), pct(row.or_and.recall).c_str(),
                  pct(row.average.recall).c_str());
    out << line;
  }
  return out.str();
}

std::vector<std::size_t> scatter_span(std::size_t n, Span span, Rng& rng) {
  if (span.start > span.end || span.end >= n) {
    throw ConfigError("span outside [0, n-1]");
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < span.start || i > span.end) order.push_back(i);
  }
  for (std::size_t w = span.start; w <= span.end; ++w) {
    const std::size_t slot = rng.uniform_index(order.size() + 1);
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(slot), w);
  }
  return order;
}

std::size_t select_cohesion_node(const InteractionTree& tree) {
  std::size_t best = tree.nodes.size();
  double best_phi = 0.0;
  for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
    const TreeNode& node = tree.nodes[id];
    if (node.is_leaf() || node.span.length() == tree.n) continue;
    if (!node.annotation) throw ConfigError("cohesion needs an annotated tree");
    if (best == tree.nodes.size() || node.annotation->contribution > best_phi) {
      best = id;
      best_phi = node.annotation->contribution;
    }
  }
  return best == tree.nodes.size() ? tree.root() : best;
}

CohesionResult cohesion_score(const std::vector<CohesionSentence>& sentences,
                              const CohesionConfig& config) {
  if (sentences.empty()) throw ConfigError("cohesion needs at least one sentence");
  if (config.shuffles == 0) throw ConfigError("cohesion needs Q >= 1");
  CohesionResult result;
  result.sentences.resize(sentences.size());

  parallel_for(sentences.size(), config.workers, [&](std::size_t i) {
    const auto& sentence = sentences[i];
    if (!sentence.model || !sentence.scorer) {
      throw ConfigError("cohesion sentence needs a model and a sequence scorer");
    }
    const std::size_t n = sentence.model->num_players();
    if (n < 2) {
      throw ConfigError("cohesion needs sentences of at least two words");
    }
    const std::uint64_t sentence_seed = derive_seed(config.seed, i);
    TreeRecipe recipe;
    recipe.strategy = Strategy::kOurs;
    recipe.engine = choice_of(config.engine);
    recipe.samples = config.engine.sampling.samples;
    recipe.antithetic = config.engine.sampling.antithetic;
    recipe.seed = sentence_seed;
    const GameContext game(sentence.model);
    const InteractionTree tree = build_tree(game, recipe);
    const Span span = tree.nodes[select_cohesion_node(tree)].span;

    std::vector<std::size_t> identity(n);
    std::iota(identity.begin(), identity.end(), 0);
    const double base = sentence.scorer->score_sequence(identity);
    Rng rng(derive_seed(sentence_seed, 0x73687566));
    std::vector<double> drops;
    drops.reserve(config.shuffles);
    for (std::size_t q = 0; q < config.shuffles; ++q) {
      const auto order = scatter_span(n, span, rng);
      drops.push_back(base - sentence.scorer->score_sequence(order));
    }
    double mean = 0.0;
    for (double d : drops) mean += d;
    mean /= static_cast<double>(drops.size());
    double var = 0.0;
    for (double d : drops) var += (d - mean) * (d - mean);
    var = drops.size() > 1 ? var / static_cast<double>(drops.size() - 1) : 0.0;
    result.sentences[i] = {span, mean, std::sqrt(var)};
  });

  for (const auto& s : result.sentences) result.score += s.mean_drop;
  result.score /= static_cast<double>(sentences.size());
  return result;
}

std::vector<CurvePoint> instability_curve(const GameContext& game,
                                          const std::vector<std::size_t>& samples,
                                          std::size_t trials,
                                          const Engine& engine,
                                          std::size_t workers) {
  if (trials == 0) throw ConfigError("instability curve needs >= 1 trial");
  std::vector<CurvePoint> curve;
  for (std::size_t t_samples : samples) {
    std::vector<double> values(trials, 0.0);
    parallel_for(trials, workers, [&](std::size_t trial) {
      Engine e = engine;
      if (!e.is_exact()) {
        e.sampling.samples = t_samples;
        e.sampling.seed =
            derive_seed(derive_seed(engine.sampling.seed, t_samples), trial);
      }
      values[trial] = instability(game, e);
    });
    double mean = 0.0;
    for (double v : values) mean += v;
    curve.push_back({t_samples, mean / static_cast<double>(trials)});
  }
  return curve;
}

AuditResult nonadjacency_audit(const std::vector<GameContext>& games,
                               const TreeRecipe& recipe, std::size_t max_steps) {
  AuditResult result;
  result.rate.assign(max_steps, 0.0);
  result.sentences.assign(max_steps, 0);
  std::vector<std::size_t> incorrect(max_steps, 0);

  TreeRecipe ours = recipe;
  ours.strategy = Strategy::kOurs;
  ours.annotate = false;
  for (const GameContext& game : games) {
    BuildOptions options;
    options.observer = [&](const MergeStep& step) {
      if (step.step > max_steps) return;
      const auto& frontier = *step.frontier;
      const double chosen_r = (*step.keys)[step.chosen];
      bool miss = false;
      for (std::size_t a = 0; a < frontier.size() && !miss; ++a) {
        for (std::size_t c = a + 2; c < frontier.size(); ++c) {
          if (nonadjacent_density(*step.analyzer, frontier, a, c) >
              chosen_r + kAuditTolerance) {
            miss = true;
            break;
          }
        }
      }
      ++result.sentences[step.step - 1];
      if (miss) ++incorrect[step.step - 1];
    };
    build_tree(game, ours, options);
  }
  for (std::size_t k = 0; k < max_steps; ++k) {
    result.rate[k] = result.sentences[k] == 0
                         ? 0.0
                         : static_cast<double>(incorrect[k]) / result.sentences[k];
  }
  return result;
}

}  // namespace itree
