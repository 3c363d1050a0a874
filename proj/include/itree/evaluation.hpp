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

#ifndef ITREE_EVALUATION_HPP_
#define ITREE_EVALUATION_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "itree/boolean_models.hpp"
#include "itree/game.hpp"
#include "itree/rng.hpp"
#include "itree/shapley.hpp"
#include "itree/tree.hpp"
#include "itree/tree_builder.hpp"

namespace itree {

// Which spans enter the unlabeled comparison. Length-1 spans never do. The
// full span is shared by every tree over n positions, so by default it is left
// out of both sides.
struct SpanConvention {
  bool include_full_span = false;
};

struct SpanSet {
  std::size_t n = 0;
  std::set<Span> spans;

  static SpanSet from_spans(std::size_t n, const std::vector<Span>& spans,
                            const SpanConvention& convention = {});
  static SpanSet from_tree(const InteractionTree& tree,
                           const SpanConvention& convention = {});
  static SpanSet from_truth(const GroundTruthTree& truth,
                            const SpanConvention& convention = {});
};

struct F1Score {
  double f1 = 0.0;
  double recall = 0.0;
  double precision = 0.0;
};

// Throws ConfigError when the two sets cover different n.
F1Score unlabeled_f1(const SpanSet& predicted, const SpanSet& truth);

struct RecipeReport {
  std::string name;
  std::vector<F1Score> per_model;  // suite order; Random averaged over seeds
  F1Score and_or;
  F1Score or_and;
  F1Score average;  // mean of the two halves
};

struct SuiteReport {
  std::size_t n_vars = 0;
  std::size_t models = 0;
  std::size_t random_seeds = 0;
  std::vector<RecipeReport> rows;
};

struct ExperimentOptions {
  std::size_t workers = 1;
  std::size_t random_seeds = 10;
  std::uint64_t seed = 0;
  SpanConvention convention;
};

// One tree per model per recipe, compared against the suite's ground truth.
SuiteReport run_andor_experiment(const std::vector<SuiteEntry>& suite,
                                 const std::vector<TreeRecipe>& recipes,
                                 const ExperimentOptions& options = {});

std::string report_to_csv(const SuiteReport& report);
// `config` is a serialized JSON object echoed into the artifact.
std::string report_to_json(const SuiteReport& report,
                           const std::string& config = {});
// Percentages laid out like a results table.
std::string report_summary(const SuiteReport& report);

// Moves each word of `span` (left to right) out of the sequence and inserts it
// at a uniformly random slot of the remaining sequence. Returns the new order
// of original positions.
std::vector<std::size_t> scatter_span(std::size_t n, Span span, Rng& rng);

struct CohesionSentence {
  std::shared_ptr<const ValueModel> model;
  std::shared_ptr<const SequenceScorer> scorer;
};

struct CohesionConfig {
  std::size_t shuffles = 100;  // Q
  Engine engine = Engine::sampled({2000, 0, false});
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

struct CohesionSentenceResult {
  Span selected;
  double mean_drop = 0.0;
  double stddev_drop = 0.0;  // sample standard deviation over shuffles
};

struct CohesionResult {
  double score = 0.0;
  std::vector<CohesionSentenceResult> sentences;
};

// The node with the largest contribution among internal non-root nodes (the
// root when n == 2); earlier merges win ties.
std::size_t select_cohesion_node(const InteractionTree& tree);

CohesionResult cohesion_score(const std::vector<CohesionSentence>& sentences,
                              const CohesionConfig& config);

struct CurvePoint {
  std::size_t samples = 0;
  double mean_instability = 0.0;
};

// Mean instability over `trials` seed pairs per sample count. An exact
// `engine` yields zeros; a sampled one supplies the base seed and antithetic
// flag.
std::vector<CurvePoint> instability_curve(const GameContext& game,
                                          const std::vector<std::size_t>& samples,
                                          std::size_t trials,
                                          const Engine& engine,
                                          std::size_t workers = 1);

struct AuditResult {
  std::vector<double> rate;            // per merge step
  std::vector<std::size_t> sentences;  // games reaching that step
};

// Compares the chosen pair's r with r' of every non-adjacent frontier pair
// during the first `max_steps` merges of an "ours" build.
AuditResult nonadjacency_audit(const std::vector<GameContext>& games,
                               const TreeRecipe& recipe,
                               std::size_t max_steps = 5);

}  // namespace itree

#endif  // ITREE_EVALUATION_HPP_
