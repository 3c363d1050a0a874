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

#ifndef ITREE_CLI_HPP_
#define ITREE_CLI_HPP_

#include <iosfwd>
#include <memory>
#include <string>

#include "itree/external_model.hpp"
#include "itree/value_model.hpp"

namespace itree {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitModel = 3;
inline constexpr int kExitSchema = 4;

struct ResolvedModel {
  std::shared_ptr<const ValueModel> model;
  std::shared_ptr<const SequenceScorer> scorer;  // null if order is not scored
};

// Model specs:
//   toy                       built-in four-word toy model
//   toy:w=1,-2,0.5;b=0-1:3    weights and pair bonuses i-j:value
//   and-or:3,4,4 | or-and:2,1 two-level boolean circuit over a composition
//   suite:<index>[:<n_vars>]  entry of the boolean suite
//   and:<n> | or:<n> | majority:<n>
// Throws ConfigError on a malformed spec.
ResolvedModel resolve_model(const std::string& spec);

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace itree

#endif  // ITREE_CLI_HPP_
