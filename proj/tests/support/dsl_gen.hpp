// Copyright 2026 The vpe Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <random>
#include <string>

#include "vpe/eval_dsl.hpp"

namespace vpe::testing {

/// Random string over an alphabet stressing the lexer: quotes, separators,
/// parentheses, newlines, and multi-byte UTF-8.
template <typename Rng>
std::string random_literal(Rng& rng) {
  static const std::vector<std::string> kPieces = {
      "a", "b", "z", " ", "dog", "'", "''", ";", "\n", "(", ")", ",", "img", "\t",
      "\xC3\xA9", "\xE2\x82\xAC", "0", "==3", "|", "\\", "\"", "#"};
  std::uniform_int_distribution<int> len(0, 8);
  std::uniform_int_distribution<std::size_t> pick(0, kPieces.size() - 1);
  std::string out;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) out += kPieces[pick(rng)];
  return out;
}

template <typename Rng>
dsl::EvalProgram random_program(Rng& rng) {
  std::uniform_int_distribution<int> stmts(1, 6);
  std::uniform_int_distribution<int> mod(0, 5);
  dsl::EvalProgram p;
  const int n = stmts(rng);
  for (int i = 0; i < n; ++i) {
    dsl::ModuleCall call;
    call.module = static_cast<dsl::Module>(mod(rng));
    call.args.push_back(dsl::Arg::img());
    for (std::size_t a = 1; a < dsl::module_arity(call.module); ++a) {
      call.args.push_back(dsl::Arg::str(random_literal(rng)));
    }
    p.calls.push_back(std::move(call));
  }
  return p;
}

/// Random byte string biased toward DSL-shaped fragments.
template <typename Rng>
std::string random_bytes(Rng& rng) {
  static const std::vector<std::string> kFragments = {
      "objectEval", "countEval", "vqa", "img", "(", ")", ",", "'", "'dog'", ";", "\n", " "};
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<int> coin(0, 2);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<std::size_t> frag(0, kFragments.size() - 1);
  std::string out;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    if (coin(rng) == 0) out.push_back(static_cast<char>(byte(rng)));
    else out += kFragments[frag(rng)];
  }
  return out;
}

}  // namespace vpe::testing
