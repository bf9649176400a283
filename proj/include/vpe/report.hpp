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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vpe/program_runner.hpp"

namespace vpe::report {

/// One line per statement: "[score] call — explanation" ("[0!]" marks an
/// errored statement), then "score: {mean}" with two decimals.
std::string render_text_report(const EvalReport& report);

/// SVG with one rect + label per annotation, in annotation order, and the
/// prompt as caption. Coordinates are normalized boxes scaled by the image
/// size, printed with at most one decimal.
std::string render_overlay(const EvalReport& report, int width, int height);

/// Stroke color for an annotation role.
std::string_view role_color(Role role);

enum class GroupBy { kSkill, kModel };

struct SummaryTable {
  // Column keys in order (skills), excluding the average column.
  std::vector<std::string> columns;
  // Row key ("all" for skill grouping, model names otherwise).
  std::vector<std::string> rows;
  // values[row][column] = mean score x 100; absent cells are missing.
  std::map<std::string, std::map<std::string, double>> values;
  // Per-row mean of the column values (the "average" column).
  std::map<std::string, double> average;
};

/// Per-group mean score x 100. Grouping by skill yields one row; grouping by
/// model yields one row per model with a column per skill. Throws
/// Error(kInvalidArgument) when a report lacks the grouping tag.
SummaryTable summarize(const std::vector<EvalReport>& reports, GroupBy group_by);

/// Mean of per-skill percentages, as in the Average column.
double row_average(const std::vector<double>& per_skill);

std::string render_table_text(const SummaryTable& table);
std::string render_table_csv(const SummaryTable& table);

/// Prints with at most `decimals` fractional digits (trailing zeros and a
/// trailing point removed).
std::string format_number(double v, int decimals);

}  // namespace vpe::report
