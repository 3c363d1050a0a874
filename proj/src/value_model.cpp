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

#include "itree/value_model.hpp"

namespace itree {

std::vector<double> ValueModel::score_batch(
    std::span<const PlayerSet> masks) const {
  std::vector<double> out;
  out.reserve(masks.size());
  for (const auto& m : masks) out.push_back(score(m));
  return out;
}

}  // namespace itree
