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

// Stdio model peer used by the client tests.
#include <cstdlib>
#include <cstring>
#include <string>

#include "peer.hpp"

int main(int argc, char** argv) {
  peer::Options opt;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    const std::string value = argv[i + 1];
    if (key == "--n") {
      opt.n = std::strtoul(value.c_str(), nullptr, 10);
    } else if (key == "--mode") {
      if (value == "silent") opt.mode = peer::Mode::kSilent;
      if (value == "malformed") opt.mode = peer::Mode::kMalformed;
      if (value == "error") opt.mode = peer::Mode::kError;
      if (value == "wrong-id") opt.mode = peer::Mode::kWrongId;
      if (value == "exit") opt.mode = peer::Mode::kExit;
    }
  }
  peer::serve(0, 1, opt);
  return 0;
}
