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

#include "itree/tree.hpp"

#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "itree/errors.hpp"
#include "json.hpp"

namespace itree {

using nlohmann::json;

namespace {

std::string fmt_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

json engine_json(const std::optional<Engine>& engine) {
  if (!engine) return nullptr;
  if (engine->is_exact()) return {{"kind", "exact"}};
  return {{"kind", "sampled"},
          {"samples", engine->sampling.samples},
          {"seed", engine->sampling.seed},
          {"antithetic", engine->sampling.antithetic}};
}

std::string escape_dot(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kOurs:
      return "ours";
    case Strategy::kShapInteraction:
      return "si";
    case Strategy::kShapInteractionAbs:
      return "si-abs";
    case Strategy::kRandom:
      return "random";
    case Strategy::kLeftBranching:
      return "lb";
    case Strategy::kRightBranching:
      return "rb";
  }
  return "unknown";
}

Strategy parse_strategy(const std::string& name) {
  for (Strategy s : {Strategy::kOurs, Strategy::kShapInteraction,
                     Strategy::kShapInteractionAbs, Strategy::kRandom,
                     Strategy::kLeftBranching, Strategy::kRightBranching}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown strategy '" + name +
                    "' (expected ours, si, si-abs, random, lb, rb)");
}

std::vector<Span> InteractionTree::internal_spans() const {
  std::vector<Span> out;
  for (const auto& node : nodes) {
    if (node.span.length() >= 2) out.push_back(node.span);
  }
  return out;
}

std::string tree_to_json(const InteractionTree& tree, const std::string& config) {
  json nodes = json::array();
  for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
    const TreeNode& node = tree.nodes[id];
    json j = {{"id", id},
              {"span", {node.span.start, node.span.end}},
              {"label", node.label}};
    if (!node.is_leaf()) {
      j["left"] = *node.left;
      j["right"] = *node.right;
      j["merge_step"] = node.merge_step;
      j["key"] = node.key;
      if (node.annotation) {
        const NodeAnnotation& a = *node.annotation;
        j["metrics"] = {{"B", a.interaction.benefit},
                        {"B_left", a.interaction.benefit_first},
                        {"B_right", a.interaction.benefit_second},
                        {"B_between", a.interaction.between},
                        {"psi_inter", a.interaction.psi.inter},
                        {"psi_intra_left", a.interaction.psi.intra_first},
                        {"psi_intra_right", a.interaction.psi.intra_second},
                        {"r", a.r},
                        {"s", a.s},
                        {"t", a.t},
                        {"phi", a.contribution}};
      }
    }
    nodes.push_back(std::move(j));
  }
  json doc = {{"schema", kTreeSchema}};
  if (!config.empty()) doc["config"] = json::parse(config);
  doc["strategy"] = to_string(tree.strategy);
  doc["engine"] = engine_json(tree.engine);
  doc["seed"] = tree.seed;
  doc["n"] = tree.n;
  doc["root"] = tree.root();
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

std::string tree_to_dot(const InteractionTree& tree) {
  std::ostringstream out;
  out << "digraph interaction_tree {\n  node [shape=box, fontname=\"Helvetica\"];\n";
  for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
    const TreeNode& node = tree.nodes[id];
    std::string label = node.label;
    if (node.annotation) {
      const NodeAnnotation& a = *node.annotation;
      label += "\\nB=" + fmt_num(a.interaction.between) + " r=" + fmt_num(a.r) +
               " s=" + fmt_num(a.s) + " t=" + fmt_num(a.t) +
               "\\nphi=" + fmt_num(a.contribution);
    }
    out << "  n" << id << " [label=\"" << escape_dot(label) << "\""
        << (node.is_leaf() ? ", style=filled, fillcolor=lightblue" : "") << "];\n";
  }
  for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
    const TreeNode& node = tree.nodes[id];
    if (node.is_leaf()) continue;
    out << "  n" << id << " -> n" << *node.left << ";\n";
    out << "  n" << id << " -> n" << *node.right << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string tree_to_ascii(const InteractionTree& tree) {
  std::ostringstream out;
  std::function<void(std::size_t, const std::string&, bool, bool)> draw =
      [&](std::size_t id, const std::string& prefix, bool last, bool top) {
        const TreeNode& node = tree.nodes[id];
        out << prefix << (top ? "" : (last ? "`-- " : "|-- "));
        out << "[" << node.span.start << "-" << node.span.end << "] "
            << node.label;
        if (node.annotation) {
          const NodeAnnotation& a = *node.annotation;
          out << "  (step " << node.merge_step
              << ", B=" << fmt_num(a.interaction.benefit)
              << ", B_between=" << fmt_num(a.interaction.between)
              << ", r=" << fmt_num(a.r) << ", s=" << fmt_num(a.s)
              << ", t=" << fmt_num(a.t) << ", phi=" << fmt_num(a.contribution)
              << ")";
        } else if (!node.is_leaf()) {
          out << "  (step " << node.merge_step << ", key=" << fmt_num(node.key)
              << ")";
        }
        out << "\n";
        if (node.is_leaf()) return;
        const std::string child_prefix =
            prefix + (top ? "" : (last ? "    " : "|   "));
        draw(*node.left, child_prefix, false, false);
        draw(*node.right, child_prefix, true, false);
      };
  draw(tree.root(), "", true, true);
  return out.str();
}

InteractionTree tree_from_json(const std::string& text) {
  InteractionTree tree;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object() || doc.value("schema", "") != kTreeSchema) {
      throw SchemaError(std::string("expected a \"schema\": \"") + kTreeSchema +
                        "\" document");
    }
    tree.n = doc.at("n").get<std::size_t>();
    if (tree.n == 0) throw SchemaError("tree must cover at least one position");
    if (doc.contains("strategy") && doc["strategy"].is_string()) {
      try {
        tree.strategy = parse_strategy(doc["strategy"].get<std::string>());
      } catch (const ConfigError&) {
        // External trees may carry their own producer name.
      }
    }
    if (doc.contains("seed") && doc["seed"].is_number_unsigned()) {
      tree.seed = doc["seed"].get<std::uint64_t>();
    }
    const json& nodes = doc.at("nodes");
    if (!nodes.is_array()) throw SchemaError("\"nodes\" must be an array");
    for (const auto& j : nodes) {
      TreeNode node;
      const json& span = j.at("span");
      if (!span.is_array() || span.size() != 2) {
        throw SchemaError("node span must be [start, end]");
      }
      node.span = {span[0].get<std::size_t>(), span[1].get<std::size_t>()};
      if (node.span.start > node.span.end || node.span.end >= tree.n) {
        throw SchemaError("node span outside [0, n-1]");
      }
      node.label = j.value("label", "");
      if (j.contains("left") && j.contains("right")) {
        node.left = j["left"].get<std::size_t>();
        node.right = j["right"].get<std::size_t>();
        node.merge_step = j.value("merge_step", std::size_t{0});
        node.key = j.value("key", 0.0);
      }
      tree.nodes.push_back(std::move(node));
    }
    if (tree.nodes.empty()) throw SchemaError("tree has no nodes");
    for (const auto& node : tree.nodes) {
      if (!node.is_leaf() && (*node.left >= tree.nodes.size() ||
                              *node.right >= tree.nodes.size())) {
        throw SchemaError("child reference out of range");
      }
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed tree JSON: ") + e.what());
  }
  return tree;
}

}  // namespace itree
