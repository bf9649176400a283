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

#include "vpe/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "vpe/error.hpp"
#include "vpe/skill_bench.hpp"

namespace vpe::report {
namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

// Skills first in canonical order, then anything else alphabetically.
bool column_order(const std::string& a, const std::string& b) {
  const auto rank = [](const std::string& s) {
    const auto skill = bench::skill_from_name(s);
    return skill ? static_cast<int>(*skill) : 100;
  };
  if (rank(a) != rank(b)) return rank(a) < rank(b);
  return a < b;
}

}  // namespace

std::string format_number(double v, int decimals) {
  std::string s = fixed(v, decimals);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string render_text_report(const EvalReport& report) {
  std::string out;
  for (const auto& r : report.results) {
    out += r.errored ? "[0!] " : "[" + std::to_string(r.score) + "] ";
    out += dsl::print_call(r.call);
    out += " — ";
    out += r.explanation;
    out += '\n';
  }
  out += "score: " + fixed(report.score, 2);
  if (report.no_scored_statements) out += " (no scored statements)";
  out += '\n';
  return out;
}

std::string_view role_color(Role role) {
  switch (role) {
    case Role::kSubject: return "#1f77b4";
    case Role::kReference: return "#ff7f0e";
    case Role::kDetected: return "#2ca02c";
    case Role::kOcr: return "#d62728";
  }
  return "#000000";
}

std::string render_overlay(const EvalReport& report, int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "overlay dimensions must be positive");
  }
  const auto px = [](double v) { return format_number(v, 1); };
  const std::string w = std::to_string(width);
  const std::string h = std::to_string(height);
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w + "\" height=\"" + h +
         "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  for (const auto& result : report.results) {
    for (const auto& a : result.annotations) {
      const double x = a.box.x1 * width;
      const double y = a.box.y1 * height;
      const double bw = a.box.x2 * width - x;
      const double bh = a.box.y2 * height - y;
      const std::string color(role_color(a.role));
      out += "  <rect x=\"" + px(x) + "\" y=\"" + px(y) + "\" width=\"" + px(bw) + "\" height=\"" +
             px(bh) + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" data-role=\"" +
             std::string(role_name(a.role)) + "\"/>\n";
      out += "  <text x=\"" + px(x) + "\" y=\"" + px(std::max(0.0, y - 4.0)) +
             "\" fill=\"" + color + "\" font-size=\"14\">" + xml_escape(a.label) + "</text>\n";
    }
  }
  out += "  <text x=\"4\" y=\"" + std::to_string(std::max(height - 6, 0)) +
         "\" fill=\"#000000\" font-size=\"16\">" +
         xml_escape(report.prompt + " (score " + fixed(report.score, 2) + ")") + "</text>\n";
  out += "</svg>\n";
  return out;
}

double row_average(const std::vector<double>& per_skill) {
  if (per_skill.empty()) throw Error(ErrorCode::kInvalidArgument, "average of an empty row");
  return std::accumulate(per_skill.begin(), per_skill.end(), 0.0) /
         static_cast<double>(per_skill.size());
}

SummaryTable summarize(const std::vector<EvalReport>& reports, GroupBy group_by) {
  std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> acc;
  for (const auto& r : reports) {
    if (r.skill.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "report '" + r.id + "' has no skill tag");
    }
    std::string row = "all";
    if (group_by == GroupBy::kModel) {
      if (r.model.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "report '" + r.id + "' has no model tag");
      }
      row = r.model;
    }
    auto& [sum, n] = acc[row][r.skill];
    sum += r.score;
    ++n;
  }
  SummaryTable t;
  for (const auto& [row, cols] : acc) {
    t.rows.push_back(row);
    std::vector<double> per_skill;
    for (const auto& [col, v] : cols) {
      const double pct = 100.0 * v.first / static_cast<double>(v.second);
      t.values[row][col] = pct;
      per_skill.push_back(pct);
      if (std::find(t.columns.begin(), t.columns.end(), col) == t.columns.end()) {
        t.columns.push_back(col);
      }
    }
    t.average[row] = row_average(per_skill);
  }
  std::sort(t.columns.begin(), t.columns.end(), column_order);
  return t;
}

std::string render_table_text(const SummaryTable& t) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header = {"group"};
  header.insert(header.end(), t.columns.begin(), t.columns.end());
  header.push_back("average");
  cells.push_back(header);
  for (const auto& row : t.rows) {
    std::vector<std::string> line = {row};
    for (const auto& col : t.columns) {
      const auto& vals = t.values.at(row);
      const auto it = vals.find(col);
      line.push_back(it == vals.end() ? "-" : fixed(it->second, 1));
    }
    line.push_back(fixed(t.average.at(row), 1));
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], line[i].size());
  }
  std::string out;
  for (const auto& line : cells) {
    std::string text;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const std::string pad(widths[i] - line[i].size(), ' ');
      text += i == 0 ? line[i] + pad : "  " + pad + line[i];
    }
    out += text + "\n";
  }
  return out;
}

std::string render_table_csv(const SummaryTable& t) {
  std::string out = "group";
  for (const auto& c : t.columns) out += "," + csv_field(c);
  out += ",average\n";
  for (const auto& row : t.rows) {
    out += csv_field(row);
    for (const auto& col : t.columns) {
      const auto& vals = t.values.at(row);
      const auto it = vals.find(col);
      out += "," + (it == vals.end() ? std::string() : fixed(it->second, 1));
    }
    out += "," + fixed(t.average.at(row), 1) + "\n";
  }
  return out;
}

}  // namespace vpe::report
