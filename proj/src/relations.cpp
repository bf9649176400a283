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

#include "vpe/relations.hpp"

#include <array>
#include <charconv>
#include <utility>

#include "vpe/text.hpp"

namespace vpe {

bool CountExpr::matches(int n) const {
  switch (op) {
    case CountOp::kEq: return n == operand;
    case CountOp::kNe: return n != operand;
    case CountOp::kLt: return n < operand;
    case CountOp::kLe: return n <= operand;
    case CountOp::kGt: return n > operand;
    case CountOp::kGe: return n >= operand;
  }
  return false;
}

std::string CountExpr::str() const {
  static constexpr std::array<std::string_view, 6> kOps = {"==", "!=", "<", "<=", ">", ">="};
  return std::string(kOps[static_cast<int>(op)]) + std::to_string(operand);
}

std::optional<CountExpr> parse_count_expr(std::string_view s) {
  s = text::trim(s);
  CountExpr expr;
  // Longest operators first.
  static constexpr std::array<std::pair<std::string_view, CountOp>, 6> kOps = {{
      {"==", CountOp::kEq},
      {"!=", CountOp::kNe},
      {"<=", CountOp::kLe},
      {">=", CountOp::kGe},
      {"<", CountOp::kLt},
      {">", CountOp::kGt},
  }};
  for (const auto& [tok, op] : kOps) {
    if (s.starts_with(tok)) {
      expr.op = op;
      s = text::trim(s.substr(tok.size()));
      break;
    }
  }
  if (s.empty() || s.front() == '-' || s.front() == '+') return std::nullopt;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), expr.operand);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return expr;
}

std::optional<SpatialRelation> parse_spatial_relation(std::string_view s) {
  const std::string r = text::normalize(s);
  static const std::array<std::pair<std::string_view, SpatialRelation>, 16> kForms = {{
      {"left", SpatialRelation::kLeft},
      {"left of", SpatialRelation::kLeft},
      {"to the left of", SpatialRelation::kLeft},
      {"right", SpatialRelation::kRight},
      {"right of", SpatialRelation::kRight},
      {"to the right of", SpatialRelation::kRight},
      {"above", SpatialRelation::kAbove},
      {"below", SpatialRelation::kBelow},
      {"front", SpatialRelation::kFront},
      {"in front", SpatialRelation::kFront},
      {"front of", SpatialRelation::kFront},
      {"in front of", SpatialRelation::kFront},
      {"behind", SpatialRelation::kBehind},
      {"behind of", SpatialRelation::kBehind},
      {"on the left of", SpatialRelation::kLeft},
      {"on the right of", SpatialRelation::kRight},
  }};
  for (const auto& [form, rel] : kForms) {
    if (r == form) return rel;
  }
  return std::nullopt;
}

std::optional<ScaleRelation> parse_scale_relation(std::string_view s) {
  const std::string r = text::normalize(s);
  static const std::array<std::pair<std::string_view, ScaleRelation>, 11> kForms = {{
      {"smaller", ScaleRelation::kSmaller},
      {"smaller than", ScaleRelation::kSmaller},
      {"bigger", ScaleRelation::kBigger},
      {"bigger than", ScaleRelation::kBigger},
      {"larger", ScaleRelation::kBigger},
      {"larger than", ScaleRelation::kBigger},
      {"same", ScaleRelation::kSame},
      {"same size", ScaleRelation::kSame},
      {"same size as", ScaleRelation::kSame},
      {"the same size as", ScaleRelation::kSame},
      {"similar size", ScaleRelation::kSame},
  }};
  for (const auto& [form, rel] : kForms) {
    if (r == form) return rel;
  }
  return std::nullopt;
}

std::string_view relation_word(SpatialRelation r) {
  switch (r) {
    case SpatialRelation::kLeft: return "left";
    case SpatialRelation::kRight: return "right";
    case SpatialRelation::kAbove: return "above";
    case SpatialRelation::kBelow: return "below";
    case SpatialRelation::kFront: return "front";
    case SpatialRelation::kBehind: return "behind";
  }
  return "";
}

std::string_view relation_word(ScaleRelation r) {
  switch (r) {
    case ScaleRelation::kSmaller: return "smaller";
    case ScaleRelation::kBigger: return "bigger";
    case ScaleRelation::kSame: return "same";
  }
  return "";
}

std::string_view relation_phrase(SpatialRelation r) {
  switch (r) {
    case SpatialRelation::kLeft: return "to the left of";
    case SpatialRelation::kRight: return "to the right of";
    case SpatialRelation::kAbove: return "above";
    case SpatialRelation::kBelow: return "below";
    case SpatialRelation::kFront: return "in front of";
    case SpatialRelation::kBehind: return "behind";
  }
  return "";
}

std::string_view relation_phrase(ScaleRelation r) {
  switch (r) {
    case ScaleRelation::kSmaller: return "smaller than";
    case ScaleRelation::kBigger: return "bigger than";
    case ScaleRelation::kSame: return "the same size as";
  }
  return "";
}

std::vector<std::string> split_choices(std::string_view choices) {
  std::vector<std::string> out;
  for (const auto& c : text::split(choices, '|')) out.emplace_back(text::trim(c));
  return out;
}

}  // namespace vpe
