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

#include "itree/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "itree/boolean_models.hpp"
#include "itree/errors.hpp"
#include "itree/evaluation.hpp"
#include "itree/parallel.hpp"
#include "itree/toy_models.hpp"
#include "itree/tree_builder.hpp"
#include "json.hpp"

namespace itree {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, const std::string& seps) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (seps.find(c) != std::string::npos) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  if constexpr (std::is_floating_point_v<T>) {
    try {
      std::size_t used = 0;
      value = std::stod(text, &used);
      if (used == text.size()) return value;
    } catch (const std::exception&) {
    }
  } else {
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc() && ptr == last) return value;
  }
  throw ConfigError("bad " + what + " '" + text + "'");
}

std::vector<std::size_t> parse_composition(const std::string& text) {
  std::vector<std::size_t> parts;
  for (const auto& p : split(text, ",|")) {
    parts.push_back(parse_number<std::size_t>(p, "composition part"));
  }
  return parts;
}

ResolvedModel resolve_toy(const std::string& body) {
  std::vector<double> weights = {0.5, -0.25, 1.0, 0.25};
  std::vector<PairBonus> bonuses = {{1, 2, -1.5}};
  if (!body.empty()) {
    weights.clear();
    bonuses.clear();
    for (const auto& field : split(body, ";")) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw ConfigError("bad toy field '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "w") {
        for (const auto& w : split(value, ",")) {
          weights.push_back(parse_number<double>(w, "toy weight"));
        }
      } else if (key == "b") {
        if (value.empty()) continue;
        for (const auto& b : split(value, ",")) {
          const auto colon = b.find(':');
          const auto dash = b.find('-');
          if (colon == std::string::npos || dash == std::string::npos || dash > colon) {
            throw ConfigError("bad toy bonus '" + b + "', expected i-j:value");
          }
          bonuses.push_back(
              {parse_number<std::size_t>(b.substr(0, dash), "bonus position"),
               parse_number<std::size_t>(b.substr(dash + 1, colon - dash - 1),
                                         "bonus position"),
               parse_number<double>(b.substr(colon + 1), "bonus value")});
        }
      } else {
        throw ConfigError("unknown toy field '" + key + "'");
      }
    }
  }
  try {
    auto toy = std::make_shared<ToyTextModel>(std::move(weights), std::move(bonuses));
    return {toy, toy};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ResolvedModel wrap(std::shared_ptr<const ValueModel> model) { return {model, nullptr}; }

std::string json_config_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw ConfigError("config values must be strings, numbers, booleans or arrays");
}

std::uint64_t random_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  if (!out) throw ConfigError("cannot write " + path);
}

EngineChoice parse_engine_choice(const std::string& name) {
  if (name == "auto") return EngineChoice::kAuto;
  if (name == "exact") return EngineChoice::kExact;
  if (name == "sampled") return EngineChoice::kSampled;
  throw ConfigError("unknown engine '" + name + "'");
}

// Options shared by the model-driven commands.
struct ModelFlags {
  std::string model;
  std::string bridge;
  std::size_t bridge_pool = 1;
  std::size_t bridge_timeout_ms = 10000;
};

struct EngineFlags {
  std::string engine = "auto";
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  bool antithetic = false;
};

// Keys accepted by --config, mapped to their options.
class ConfigKeys {
 public:
  explicit ConfigKeys(CLI::App* sub) : sub_(sub) {}

  CLI::Option* add(CLI::Option* opt, const std::string& key) {
    keys_[key] = opt;
    return opt;
  }

  void apply(const std::string& path) const {
    json doc;
    try {
      doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
      throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    // A previous run's artifact carries its config under "config".
    if (doc.is_object() && doc.contains("schema") && doc.contains("config")) {
      doc = doc["config"];
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (key == "command") {
        if (value != sub_->get_name()) {
          throw ConfigError("config is for command '" + json_config_value(value) +
                            "', not '" + sub_->get_name() + "'");
        }
        continue;
      }
      const auto it = keys_.find(key);
      if (it == keys_.end()) throw ConfigError("unknown config key '" + key + "'");
      CLI::Option* opt = it->second;
      if (opt->count() > 0) continue;
      if (value.is_null()) continue;
      if (value.is_array()) {
        for (const auto& item : value) opt->add_result(json_config_value(item));
      } else {
        opt->add_result(json_config_value(value));
      }
      opt->run_callback();
    }
  }

 private:
  CLI::App* sub_;
  std::map<std::string, CLI::Option*> keys_;
};

void add_model_flags(CLI::App* sub, ConfigKeys& keys, ModelFlags& flags) {
  keys.add(sub->add_option("--model", flags.model, "Model spec")->envname("ITREE_MODEL"),
           "model");
  keys.add(sub->add_option("--bridge", flags.bridge,
                           "External model peer: shell command or host:port")
               ->envname("ITREE_BRIDGE"),
           "bridge");
  keys.add(sub->add_option("--bridge-pool", flags.bridge_pool,
                           "Connections to open to the peer"),
           "bridge_pool");
  keys.add(sub->add_option("--bridge-timeout-ms", flags.bridge_timeout_ms,
                           "Per-request timeout"),
           "bridge_timeout_ms");
}

void add_engine_flags(CLI::App* sub, ConfigKeys& keys, EngineFlags& flags,
                      CLI::Option** seed_opt) {
  keys.add(sub->add_option("--engine", flags.engine, "exact, sampled or auto")
               ->check(CLI::IsMember({"exact", "sampled", "auto"}))
               ->envname("ITREE_ENGINE"),
           "engine");
  keys.add(sub->add_option("--samples", flags.samples, "Permutations per estimate")
               ->envname("ITREE_SAMPLES"),
           "samples");
  *seed_opt = keys.add(
      sub->add_option("--seed", flags.seed, "Random seed (drawn when absent)")
          ->envname("ITREE_SEED"),
      "seed");
  keys.add(sub->add_flag("--antithetic", flags.antithetic,
                         "Pair each permutation with its reverse"),
           "antithetic");
}

ResolvedModel open_model(const ModelFlags& flags) {
  if (!flags.model.empty() && !flags.bridge.empty()) {
    throw ConfigError("--model and --bridge are mutually exclusive");
  }
  if (!flags.bridge.empty()) {
    ExternalModelOptions options;
    options.endpoint = flags.bridge;
    options.pool_size = flags.bridge_pool;
    options.timeout = std::chrono::milliseconds(flags.bridge_timeout_ms);
    return wrap(std::make_shared<ExternalModelClient>(options));
  }
  if (flags.model.empty()) throw ConfigError("one of --model or --bridge is required");
  return resolve_model(flags.model);
}

json model_config(const ModelFlags& flags) {
  json j;
  if (!flags.bridge.empty()) {
    j["bridge"] = flags.bridge;
    j["bridge_timeout_ms"] = flags.bridge_timeout_ms;
  } else {
    j["model"] = flags.model;
  }
  return j;
}

void echo_engine(json& j, const EngineFlags& flags) {
  j["engine"] = flags.engine;
  j["samples"] = flags.samples;
  j["seed"] = flags.seed;
  j["antithetic"] = flags.antithetic;
}

Engine engine_of(const EngineFlags& flags, std::size_t n, std::size_t exact_limit) {
  TreeRecipe recipe;
  recipe.engine = parse_engine_choice(flags.engine);
  recipe.samples = flags.samples;
  recipe.seed = flags.seed;
  recipe.antithetic = flags.antithetic;
  recipe.exact_limit = exact_limit;
  return recipe.resolve_engine(n);
}

struct Emitter {
  std::ostream& out;
  std::string path;
  void emit(const std::string& text) const {
    if (path.empty()) {
      out << text;
    } else {
      write_file(path, text);
    }
  }
};

}  // namespace

ResolvedModel resolve_model(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (kind == "toy") return resolve_toy(body);
    if (kind == "and-or" || kind == "or-and") {
      if (body.empty()) throw ConfigError(kind + " needs a composition, e.g. 3,4,4");
      return wrap(std::make_shared<TwoLevelBooleanModel>(
          parse_composition(body), kind == "and-or" ? BoolOp::kAnd : BoolOp::kOr));
    }
    if (kind == "suite") {
      const auto parts = split(body, ":");
      if (parts.empty() || parts.size() > 2 || parts[0].empty()) {
        throw ConfigError("expected suite:<index>[:<n_vars>]");
      }
      SuiteOptions options;
      if (parts.size() == 2) options.n_vars = parse_number<std::size_t>(parts[1], "n_vars");
      const auto index = parse_number<std::size_t>(parts[0], "suite index");
      auto suite = generate_andor_suite(options);
      if (index >= suite.size()) {
        throw ConfigError("suite index " + parts[0] + " out of range (" +
                          std::to_string(suite.size()) + " models)");
      }
      return wrap(std::make_shared<TwoLevelBooleanModel>(suite[index].model));
    }
    if (kind == "and" || kind == "or" || kind == "majority") {
      const auto n = parse_number<std::size_t>(body, "player count");
      if (kind == "and") return wrap(std::make_shared<TabularModel>(and_game(n)));
      if (kind == "or") return wrap(std::make_shared<TabularModel>(or_game(n)));
      return wrap(std::make_shared<TabularModel>(majority_game(n)));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown model spec '" + spec + "'");
}

namespace {

struct ExplainFlags {
  ModelFlags model;
  EngineFlags engine;
  std::string strategy = "ours";
  std::size_t exact_limit = 12;
  std::string labels;
  std::string out;
  std::string dot;
  std::string format = "ascii";
  bool no_annotate = false;
};

int cmd_explain(const ExplainFlags& f, std::size_t workers, std::ostream& out) {
  const ResolvedModel resolved = open_model(f.model);
  TreeRecipe recipe;
  recipe.strategy = parse_strategy(f.strategy);
  recipe.engine = parse_engine_choice(f.engine.engine);
  recipe.samples = f.engine.samples;
  recipe.seed = f.engine.seed;
  recipe.antithetic = f.engine.antithetic;
  recipe.exact_limit = f.exact_limit;
  recipe.annotate = !f.no_annotate;

  BuildOptions options;
  options.workers = workers;
  if (!f.labels.empty()) options.labels = split(f.labels, ",");

  json config = model_config(f.model);
  config["command"] = "explain";
  echo_engine(config, f.engine);
  config["strategy"] = f.strategy;
  config["exact_limit"] = f.exact_limit;
  if (!f.labels.empty()) config["labels"] = f.labels;
  if (f.no_annotate) config["no_annotate"] = true;

  const GameContext game(resolved.model);
  const InteractionTree tree = build_tree(game, recipe, options);
  const std::string tree_json = tree_to_json(tree, config.dump());
  if (!f.out.empty()) write_file(f.out, tree_json);
  if (!f.dot.empty()) write_file(f.dot, tree_to_dot(tree));
  if (f.format == "json") {
    out << tree_json;
  } else if (f.format == "dot") {
    out << tree_to_dot(tree);
  } else {
    out << tree_to_ascii(tree);
  }
  return kExitOk;
}

struct AndorFlags {
  EngineFlags engine;
  std::size_t n_vars = 11;
  std::vector<std::string> recipes;
  std::size_t random_seeds = 10;
  bool baseline_one = false;
  bool include_root = false;
  std::string out;
  std::string csv;
  std::string manifest;
  std::string format = "table";
};

int cmd_andor(const AndorFlags& f, std::size_t workers, std::ostream& out) {
  SuiteOptions suite_options;
  suite_options.n_vars = f.n_vars;
  suite_options.baseline_bit = f.baseline_one;
  const auto suite = generate_andor_suite(suite_options);

  std::vector<std::string> names = f.recipes;
  if (names.empty()) names = {"ours", "si", "si-abs", "random", "lb", "rb"};
  std::vector<TreeRecipe> recipes;
  for (const auto& name : names) {
    TreeRecipe recipe;
    recipe.strategy = parse_strategy(name);
    recipe.engine = parse_engine_choice(f.engine.engine);
    recipe.samples = f.engine.samples;
    recipe.antithetic = f.engine.antithetic;
    recipe.annotate = false;
    recipe.exact_limit = kExactPlayerCap;
    recipes.push_back(recipe);
  }
  ExperimentOptions options;
  options.workers = workers;
  options.random_seeds = f.random_seeds;
  options.seed = f.engine.seed;
  options.convention.include_full_span = f.include_root;

  json config = {{"command", "andor"},
                 {"n_vars", f.n_vars},
                 {"recipes", names},
                 {"random_seeds", f.random_seeds},
                 {"baseline_one", f.baseline_one},
                 {"include_root", f.include_root}};
  echo_engine(config, f.engine);

  const SuiteReport report = run_andor_experiment(suite, recipes, options);
  const std::string csv = "# config: " + config.dump() + "\n" + report_to_csv(report);
  const std::string report_json = report_to_json(report, config.dump());
  if (!f.out.empty()) write_file(f.out, report_json);
  if (!f.csv.empty()) write_file(f.csv, csv);
  if (!f.manifest.empty()) write_file(f.manifest, suite_manifest_json(suite));
  if (f.format == "csv") {
    out << csv;
  } else if (f.format == "json") {
    out << report_json;
  } else {
    out << report_summary(report);
  }
  return kExitOk;
}

struct StabilityFlags {
  ModelFlags model;
  EngineFlags engine;
  std::vector<std::size_t> samples_list = {10, 100, 1000};
  std::size_t trials = 20;
  std::string out;
  std::string format = "csv";
};

int cmd_stability(const StabilityFlags& f, std::size_t workers, std::ostream& out) {
  const ResolvedModel resolved = open_model(f.model);
  const GameContext game(resolved.model);
  EngineFlags eflags = f.engine;
  if (eflags.engine == "auto") eflags.engine = "sampled";
  const Engine engine = engine_of(eflags, game.num_players(), 0);
  const auto curve = instability_curve(game, f.samples_list, f.trials, engine, workers);

  json config = model_config(f.model);
  config["command"] = "stability";
  echo_engine(config, f.engine);
  config["samples_list"] = f.samples_list;
  config["trials"] = f.trials;

  std::string text;
  if (f.format == "json") {
    json points = json::array();
    for (const auto& p : curve) {
      points.push_back({{"samples", p.samples}, {"mean_instability", p.mean_instability}});
    }
    text = json{{"schema", "itree.stability/1"}, {"config", config}, {"curve", points}}
               .dump(2) +
           "\n";
  } else {
    std::ostringstream ss;
    ss << "# config: " << config.dump() << "\nsamples,mean_instability\n";
    char buf[64];
    for (const auto& p : curve) {
      std::snprintf(buf, sizeof buf, "%zu,%.12g\n", p.samples, p.mean_instability);
      ss << buf;
    }
    text = ss.str();
  }
  Emitter{out, f.out}.emit(text);
  return kExitOk;
}

struct CohesionFlags {
  std::vector<std::string> models;
  EngineFlags engine;
  std::size_t shuffles = 100;
  std::size_t exact_limit = 12;
  std::string out;
};

int cmd_cohesion(const CohesionFlags& f, std::size_t workers, std::ostream& out) {
  if (f.models.empty()) throw ConfigError("cohesion needs at least one --model");
  std::vector<CohesionSentence> sentences;
  for (const auto& spec : f.models) {
    ResolvedModel resolved = resolve_model(spec);
    if (!resolved.scorer) {
      throw ConfigError("model '" + spec + "' cannot score reordered input");
    }
    sentences.push_back({resolved.model, resolved.scorer});
  }
  CohesionConfig config;
  config.shuffles = f.shuffles;
  config.seed = f.engine.seed;
  config.workers = workers;
  std::size_t max_n = 0;
  for (const auto& s : sentences) max_n = std::max(max_n, s.model->num_players());
  config.engine = engine_of(f.engine, max_n, f.exact_limit);

  const CohesionResult result = cohesion_score(sentences, config);

  json echo = {{"command", "cohesion"},
               {"model", f.models},
               {"shuffles", f.shuffles},
               {"exact_limit", f.exact_limit}};
  echo_engine(echo, f.engine);
  json per = json::array();
  for (std::size_t i = 0; i < result.sentences.size(); ++i) {
    const auto& s = result.sentences[i];
    per.push_back({{"model", f.models[i]},
                   {"span", {s.selected.start, s.selected.end}},
                   {"mean_drop", s.mean_drop},
                   {"stddev_drop", s.stddev_drop}});
  }
  const json doc = {{"schema", "itree.cohesion/1"},
                    {"config", echo},
                    {"score", result.score},
                    {"sentences", per}};
  Emitter{out, f.out}.emit(doc.dump(2) + "\n");
  return kExitOk;
}

struct CompareFlags {
  std::string predicted;
  std::string reference;
  bool include_root = false;
  std::string format = "text";
};

int cmd_compare(const CompareFlags& f, std::ostream& out) {
  const InteractionTree predicted = tree_from_json(read_file(f.predicted));
  const InteractionTree reference = tree_from_json(read_file(f.reference));
  if (predicted.n != reference.n) {
    throw SchemaError("trees cover different lengths (" + std::to_string(predicted.n) +
                      " vs " + std::to_string(reference.n) + ")");
  }
  SpanConvention convention;
  convention.include_full_span = f.include_root;
  const F1Score score = unlabeled_f1(SpanSet::from_tree(predicted, convention),
                                     SpanSet::from_tree(reference, convention));
  if (f.format == "json") {
    const json doc = {{"f1", score.f1}, {"recall", score.recall},
                      {"precision", score.precision}, {"include_root", f.include_root}};
    out << doc.dump(2) << "\n";
  } else {
    char buf[128];
    std::snprintf(buf, sizeof buf, "f1 %.6f\nrecall %.6f\nprecision %.6f\n", score.f1,
                  score.recall, score.precision);
    out << buf;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interaction trees for black-box models", "itree"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "itree 1.0.0");

  std::size_t workers = default_workers();
  std::string config_path;

  auto common = [&](CLI::App* sub, ConfigKeys& keys) {
    sub->add_option("--config", config_path, "JSON config or earlier artifact");
    keys.add(sub->add_option("--workers", workers, "Worker threads")
                 ->envname("ITREE_WORKERS"),
             "workers");
  };

  ExplainFlags explain;
  CLI::Option* explain_seed = nullptr;
  auto* explain_cmd = app.add_subcommand("explain", "Build an interaction tree for one input");
  ConfigKeys explain_keys(explain_cmd);
  common(explain_cmd, explain_keys);
  add_model_flags(explain_cmd, explain_keys, explain.model);
  add_engine_flags(explain_cmd, explain_keys, explain.engine, &explain_seed);
  explain_keys.add(explain_cmd->add_option("--strategy", explain.strategy,
                                           "ours, si, si-abs, random, lb, rb"),
                   "strategy");
  explain_keys.add(explain_cmd->add_option("--exact-limit", explain.exact_limit,
                                           "Largest n solved exactly under --engine auto"),
                   "exact_limit");
  explain_keys.add(explain_cmd->add_option("--labels", explain.labels,
                                           "Comma-separated token labels"),
                   "labels");
  explain_keys.add(explain_cmd->add_flag("--no-annotate", explain.no_annotate,
                                         "Skip per-node metrics"),
                   "no_annotate");
  explain_cmd->add_option("--out", explain.out, "Write the tree JSON here");
  explain_cmd->add_option("--dot", explain.dot, "Write a DOT rendering here");
  explain_cmd->add_option("--format", explain.format, "stdout rendering")
      ->check(CLI::IsMember({"ascii", "json", "dot"}));

  AndorFlags andor;
  CLI::Option* andor_seed = nullptr;
  auto* andor_cmd = app.add_subcommand("andor", "Run the AND-OR boolean benchmark");
  ConfigKeys andor_keys(andor_cmd);
  common(andor_cmd, andor_keys);
  andor.engine.engine = "exact";
  add_engine_flags(andor_cmd, andor_keys, andor.engine, &andor_seed);
  andor_keys.add(andor_cmd->add_option("--n-vars", andor.n_vars, "Variables per model"),
                 "n_vars");
  andor_keys.add(andor_cmd->add_option("--recipes", andor.recipes,
                                       "Comma-separated recipes")
                     ->delimiter(','),
                 "recipes");
  andor_keys.add(andor_cmd->add_option("--random-seeds", andor.random_seeds,
                                       "Seeds averaged for the random baseline"),
                 "random_seeds");
  andor_keys.add(andor_cmd->add_flag("--baseline-one", andor.baseline_one,
                                     "Masked variables read as 1"),
                 "baseline_one");
  andor_keys.add(andor_cmd->add_flag("--include-root", andor.include_root,
                                     "Count the full span in F1"),
                 "include_root");
  andor_cmd->add_option("--out", andor.out, "Write the JSON report here");
  andor_cmd->add_option("--csv", andor.csv, "Write the CSV table here");
  andor_cmd->add_option("--manifest", andor.manifest, "Write the suite manifest here");
  andor_cmd->add_option("--format", andor.format, "stdout rendering")
      ->check(CLI::IsMember({"table", "csv", "json"}));

  StabilityFlags stability;
  CLI::Option* stability_seed = nullptr;
  auto* stability_cmd =
      app.add_subcommand("stability", "Instability of Shapley estimates versus samples");
  ConfigKeys stability_keys(stability_cmd);
  common(stability_cmd, stability_keys);
  add_model_flags(stability_cmd, stability_keys, stability.model);
  add_engine_flags(stability_cmd, stability_keys, stability.engine, &stability_seed);
  stability_keys.add(stability_cmd->add_option("--samples-list", stability.samples_list,
                                               "Comma-separated sample counts")
                         ->delimiter(','),
                     "samples_list");
  stability_keys.add(stability_cmd->add_option("--trials", stability.trials,
                                               "Seed pairs per sample count"),
                     "trials");
  stability_cmd->add_option("--out", stability.out, "Write the curve here");
  stability_cmd->add_option("--format", stability.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  CohesionFlags cohesion;
  CLI::Option* cohesion_seed = nullptr;
  auto* cohesion_cmd =
      app.add_subcommand("cohesion", "Score drop when the strongest node is scattered");
  ConfigKeys cohesion_keys(cohesion_cmd);
  common(cohesion_cmd, cohesion_keys);
  cohesion_keys.add(cohesion_cmd->add_option("--model", cohesion.models,
                                             "Model spec, once per sentence"),
                    "model");
  add_engine_flags(cohesion_cmd, cohesion_keys, cohesion.engine, &cohesion_seed);
  cohesion_keys.add(cohesion_cmd->add_option("--shuffles", cohesion.shuffles,
                                             "Shuffles per sentence"),
                    "shuffles");
  cohesion_keys.add(cohesion_cmd->add_option("--exact-limit", cohesion.exact_limit,
                                             "Largest n solved exactly under --engine auto"),
                    "exact_limit");
  cohesion_cmd->add_option("--out", cohesion.out, "Write the JSON report here");

  CompareFlags compare;
  auto* compare_cmd = app.add_subcommand("compare", "Unlabeled F1 between two tree files");
  compare_cmd->add_option("predicted", compare.predicted, "Tree JSON")->required();
  compare_cmd->add_option("reference", compare.reference, "Reference tree JSON")
      ->required();
  compare_cmd->add_flag("--include-root", compare.include_root, "Count the full span");
  compare_cmd->add_option("--format", compare.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  auto finish_seed = [&](CLI::Option* opt, EngineFlags& flags) {
    if (opt->count() == 0) {
      flags.seed = random_seed();
      err << "seed: " << flags.seed << "\n";
    }
  };

  try {
    if (workers == 0) throw ConfigError("--workers must be >= 1");
    if (explain_cmd->parsed()) {
      if (!config_path.empty()) explain_keys.apply(config_path);
      finish_seed(explain_seed, explain.engine);
      return cmd_explain(explain, workers, out);
    }
    if (andor_cmd->parsed()) {
      if (!config_path.empty()) andor_keys.apply(config_path);
      finish_seed(andor_seed, andor.engine);
      return cmd_andor(andor, workers, out);
    }
    if (stability_cmd->parsed()) {
      if (!config_path.empty()) stability_keys.apply(config_path);
      finish_seed(stability_seed, stability.engine);
      return cmd_stability(stability, workers, out);
    }
    if (cohesion_cmd->parsed()) {
      if (!config_path.empty()) cohesion_keys.apply(config_path);
      finish_seed(cohesion_seed, cohesion.engine);
      return cmd_cohesion(cohesion, workers, out);
    }
    return cmd_compare(compare, out);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const TreeBuildError& e) {
    err << "error: " << e.what() << "\n";
    return kExitModel;
  } catch (const EvaluationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitModel;
  } catch (const BridgeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitModel;
  }
}

}  // namespace itree
