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

#ifndef ITREE_BOOLEAN_MODELS_HPP_
#define ITREE_BOOLEAN_MODELS_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "itree/player_set.hpp"
#include "itree/value_model.hpp"

namespace itree {

enum class BoolOp { kAnd, kOr };

std::string to_string(BoolOp op);

// Inclusive position interval.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t length() const { return end - start + 1; }
  friend auto operator<=>(const Span&, const Span&) = default;
};

// Two-level circuit: contiguous blocks of variables reduce under `level1`, and
// block results reduce under the complementary operator.
class TwoLevelBooleanModel : public ValueModel {
 public:
  // `assignment` defaults to all ones; masked variables read `baseline_bit`.
  TwoLevelBooleanModel(std::vector<std::size_t> composition, BoolOp level1,
                       std::vector<bool> assignment = {},
                       bool baseline_bit = false);

  std::size_t num_players() const override { return num_vars_; }
  double score(const PlayerSet& present) const override;

  const std::vector<std::size_t>& composition() const { return composition_; }
  BoolOp level1() const { return level1_; }
  BoolOp level2() const;
  const std::vector<bool>& assignment() const { return assignment_; }
  bool baseline_bit() const { return baseline_bit_; }
  std::vector<Span> blocks() const;
  // e.g. "(a1&a2)|a3".
  std::string formula() const;

 private:
  std::size_t num_vars_;
  std::vector<std::size_t> composition_;
  BoolOp level1_;
  std::vector<bool> assignment_;
  bool baseline_bit_;
};

double boolean_score(const TwoLevelBooleanModel& model, const PlayerSet& mask,
                     const std::vector<bool>& assignment);

// Blocks of size >= 2 plus the full span.
struct GroundTruthTree {
  std::size_t n = 0;
  std::vector<Span> spans;
};

GroundTruthTree ground_truth(const TwoLevelBooleanModel& model);

struct SuiteOptions {
  std::size_t n_vars = 11;
  // Empty means all ones.
  std::vector<bool> assignment;
  bool baseline_bit = false;
};

struct SuiteEntry {
  TwoLevelBooleanModel model;
  GroundTruthTree truth;
};

// All contiguous compositions of n_vars, first with AND at the first level,
// then with OR at the first level: 2 * 2^(n_vars-1) models.
std::vector<SuiteEntry> generate_andor_suite(const SuiteOptions& options = {});

// Composition number `index` in [0, 2^(n-1)): bit i set means a cut after
// variable i.
std::vector<std::size_t> composition_from_index(std::size_t n,
                                                std::size_t index);

std::string suite_manifest_json(const std::vector<SuiteEntry>& suite);
std::vector<SuiteEntry> parse_suite_manifest(const std::string& json_text);

}  // namespace itree

#endif  // ITREE_BOOLEAN_MODELS_HPP_
