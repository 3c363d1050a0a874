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

#include "itree/boolean_models.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "itree/errors.hpp"
#include "json.hpp"

namespace itree {

using nlohmann::json;

std::string to_string(BoolOp op) { return op == BoolOp::kAnd ? "and" : "or"; }

namespace {

BoolOp parse_op(const std::string& s) {
  if (s == "and") return BoolOp::kAnd;
  if (s == "or") return BoolOp::kOr;
  throw SchemaError("unknown boolean operator '" + s + "'");
}

BoolOp complement(BoolOp op) {
  return op == BoolOp::kAnd ? BoolOp::kOr : BoolOp::kAnd;
}

std::string bits_to_string(const std::vector<bool>& bits) {
  std::string s;
  for (bool b : bits) s.push_back(b ? '1' : '0');
  return s;
}

std::vector<bool> bits_from_string(const std::string& s) {
  std::vector<bool> out;
  for (char c : s) {
    if (c != '0' && c != '1') throw SchemaError("assignment must be 0/1");
    out.push_back(c == '1');
  }
  return out;
}

// Reduces `values` over one block under `op`.
bool reduce_block(BoolOp op, const std::vector<bool>& inputs, std::size_t begin,
                  std::size_t end) {
  for (std::size_t i = begin; i < end; ++i) {
    if (op == BoolOp::kAnd && !inputs[i]) return false;
    if (op == BoolOp::kOr && inputs[i]) return true;
  }
  return op == BoolOp::kAnd;
}

}  // namespace

TwoLevelBooleanModel::TwoLevelBooleanModel(std::vector<std::size_t> composition,
                                           BoolOp level1,
                                           std::vector<bool> assignment,
                                           bool baseline_bit)
    : num_vars_(0),
      composition_(std::move(composition)),
      level1_(level1),
      assignment_(std::move(assignment)),
      baseline_bit_(baseline_bit) {
  if (composition_.empty()) throw ConfigError("composition is empty");
  for (std::size_t size : composition_) {
    if (size == 0) throw ConfigError("composition blocks must be non-empty");
    num_vars_ += size;
  }
  if (assignment_.empty()) assignment_.assign(num_vars_, true);
  if (assignment_.size() != num_vars_) {
    throw ConfigError("assignment length " + std::to_string(assignment_.size()) +
                      " does not match " + std::to_string(num_vars_) +
                      " variables");
  }
}

BoolOp TwoLevelBooleanModel::level2() const { return complement(level1_); }

double TwoLevelBooleanModel::score(const PlayerSet& present) const {
  return boolean_score(*this, present, assignment_);
}

std::vector<Span> TwoLevelBooleanModel::blocks() const {
  std::vector<Span> out;
  std::size_t start = 0;
  for (std::size_t size : composition_) {
    out.push_back({start, start + size - 1});
    start += size;
  }
  return out;
}

std::string TwoLevelBooleanModel::formula() const {
  const char* inner = level1_ == BoolOp::kAnd ? "&" : "|";
  const char* outer = level1_ == BoolOp::kAnd ? "|" : "&";
  std::string s;
  for (const Span& b : blocks()) {
    if (!s.empty()) s += outer;
    if (b.length() > 1) s += "(";
    for (std::size_t i = b.start; i <= b.end; ++i) {
      if (i != b.start) s += inner;
      s += "a" + std::to_string(i + 1);
    }
    if (b.length() > 1) s += ")";
  }
  return s;
}

double boolean_score(const TwoLevelBooleanModel& model, const PlayerSet& mask,
                     const std::vector<bool>& assignment) {
  const std::size_t n = model.num_players();
  if (assignment.size() != n || mask.universe_size() != n) {
    throw ConfigError("boolean_score: mask/assignment length mismatch");
  }
  std::vector<bool> inputs(n);
  for (std::size_t i = 0; i < n; ++i) {
    inputs[i] = mask.contains(i) ? assignment[i] : model.baseline_bit();
  }
  std::vector<bool> block_values;
  for (const Span& b : model.blocks()) {
    block_values.push_back(reduce_block(model.level1(), inputs, b.start, b.end + 1));
  }
  return reduce_block(model.level2(), block_values, 0, block_values.size()) ? 1.0
                                                                            : 0.0;
}

GroundTruthTree ground_truth(const TwoLevelBooleanModel& model) {
  std::set<Span> spans;
  for (const Span& b : model.blocks()) {
    if (b.length() >= 2) spans.insert(b);
  }
  spans.insert({0, model.num_players() - 1});
  return {model.num_players(), {spans.begin(), spans.end()}};
}

std::vector<std::size_t> composition_from_index(std::size_t n,
                                                std::size_t index) {
  std::vector<std::size_t> sizes;
  std::size_t current = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if ((index >> i) & 1) {
      sizes.push_back(current);
      current = 1;
    } else {
      ++current;
    }
  }
  sizes.push_back(current);
  return sizes;
}

std::vector<SuiteEntry> generate_andor_suite(const SuiteOptions& options) {
  const std::size_t n = options.n_vars;
  if (n < 2 || n > 20) {
    throw ConfigError("suite needs between 2 and 20 variables, got " +
                      std::to_string(n));
  }
  std::vector<SuiteEntry> suite;
  const std::size_t count = std::size_t{1} << (n - 1);
  suite.reserve(2 * count);
  for (BoolOp level1 : {BoolOp::kAnd, BoolOp::kOr}) {
    for (std::size_t index = 0; index < count; ++index) {
      TwoLevelBooleanModel model(composition_from_index(n, index), level1,
                                 options.assignment, options.baseline_bit);
      GroundTruthTree truth = ground_truth(model);
      suite.push_back({std::move(model), std::move(truth)});
    }
  }
  return suite;
}

std::string suite_manifest_json(const std::vector<SuiteEntry>& suite) {
  json models = json::array();
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& m = suite[i].model;
    json spans = json::array();
    for (const Span& s : suite[i].truth.spans) spans.push_back({s.start, s.end});
    models.push_back({{"index", i},
                      {"composition", m.composition()},
                      {"level1", to_string(m.level1())},
                      {"level2", to_string(m.level2())},
                      {"formula", m.formula()},
                      {"assignment", bits_to_string(m.assignment())},
                      {"baseline", m.baseline_bit() ? 1 : 0},
                      {"truth", spans}});
  }
  json doc = {{"schema", "itree.suite/1"},
              {"n_vars", suite.empty() ? 0 : suite.front().model.num_players()},
              {"models", models}};
  return doc.dump(2) + "\n";
}

std::vector<SuiteEntry> parse_suite_manifest(const std::string& json_text) {
  std::vector<SuiteEntry> suite;
  try {
    const json doc = json::parse(json_text);
    if (doc.value("schema", "") != "itree.suite/1") {
      throw SchemaError("not an itree.suite/1 manifest");
    }
    for (const auto& m : doc.at("models")) {
      TwoLevelBooleanModel model(
          m.at("composition").get<std::vector<std::size_t>>(),
          parse_op(m.at("level1").get<std::string>()),
          bits_from_string(m.at("assignment").get<std::string>()),
          m.at("baseline").get<int>() != 0);
      if (parse_op(m.at("level2").get<std::string>()) != model.level2()) {
        throw SchemaError("level2 must complement level1");
      }
      GroundTruthTree truth{model.num_players(), {}};
      for (const auto& s : m.at("truth")) {
        truth.spans.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
      }
      suite.push_back({std::move(model), std::move(truth)});
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed suite manifest: ") + e.what());
  } catch (const ConfigError& e) {
    throw SchemaError(std::string("invalid model in manifest: ") + e.what());
  }
  return suite;
}

}  // namespace itree
