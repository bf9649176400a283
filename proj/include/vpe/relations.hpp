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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vpe {

enum class CountOp { kEq, kNe, kLt, kLe, kGt, kGe };

/// `(op)? INT`; a bare integer means ==.
struct CountExpr {
  CountOp op = CountOp::kEq;
  int operand = 0;

  bool matches(int n) const;
  std::string str() const;
  bool operator==(const CountExpr&) const = default;
};

std::optional<CountExpr> parse_count_expr(std::string_view s);

enum class SpatialRelation { kLeft, kRight, kAbove, kBelow, kFront, kBehind };
enum class ScaleRelation { kSmaller, kBigger, kSame };

// Accepts the bare word and common phrasings ("to the left of",
// "in front of", "bigger than", "the same size as", ...). Anything else
// is an open relation answered by vqa.
std::optional<SpatialRelation> parse_spatial_relation(std::string_view s);
std::optional<ScaleRelation> parse_scale_relation(std::string_view s);

std::string_view relation_word(SpatialRelation r);
std::string_view relation_word(ScaleRelation r);
// "to the left of", "above", "in front of", ...
std::string_view relation_phrase(SpatialRelation r);
// "bigger than", "smaller than", "the same size as"
std::string_view relation_phrase(ScaleRelation r);

/// Splits a pipe-separated choice list, trimming each entry.
std::vector<std::string> split_choices(std::string_view choices);

}  // namespace vpe
