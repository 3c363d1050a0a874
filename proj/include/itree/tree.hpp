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

#ifndef ITREE_TREE_HPP_
#define ITREE_TREE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "itree/boolean_models.hpp"
#include "itree/interaction.hpp"
#include "itree/shapley.hpp"

namespace itree {

enum class Strategy {
  kOurs,
  kShapInteraction,
  kShapInteractionAbs,
  kRandom,
  kLeftBranching,
  kRightBranching,
};

std::string to_string(Strategy strategy);
// Accepts "ours", "si", "si-abs", "random", "lb", "rb".
Strategy parse_strategy(const std::string& name);

struct NodeAnnotation {
  InteractionResult interaction;
  double r = 0.0;
  double s = 0.0;
  double t = 0.0;
  double contribution = 0.0;  // phi of the node's span as one player
};

struct TreeNode {
  Span span;
  std::string label;
  // Internal nodes only.
  std::optional<std::size_t> left;
  std::optional<std::size_t> right;
  std::size_t merge_step = 0;  // 1-based; 0 for leaves
  double key = 0.0;            // strategy score that selected the merge
  std::optional<NodeAnnotation> annotation;

  bool is_leaf() const { return !left.has_value(); }
};

// Binary tree over n positions. Nodes 0..n-1 are the leaves in position order;
// internal node n-1+k is created by merge step k.
struct InteractionTree {
  std::size_t n = 0;
  std::vector<TreeNode> nodes;
  Strategy strategy = Strategy::kOurs;
  std::optional<Engine> engine;  // engine used for keys/annotations, if any
  std::uint64_t seed = 0;

  std::size_t root() const { return nodes.size() - 1; }
  std::vector<Span> internal_spans() const;
};

inline constexpr const char* kTreeSchema = "itree.tree/1";

// `config` is an already-serialized JSON object echoed into the artifact
// (empty for none).
std::string tree_to_json(const InteractionTree& tree,
                         const std::string& config = {});
std::string tree_to_dot(const InteractionTree& tree);
std::string tree_to_ascii(const InteractionTree& tree);
// Accepts full artifacts and minimal files carrying only "n" and node spans.
// Throws SchemaError.
InteractionTree tree_from_json(const std::string& text);

}  // namespace itree

#endif  // ITREE_TREE_HPP_
