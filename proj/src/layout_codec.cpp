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

#include "vpe/layout_codec.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "vpe/error.hpp"
#include "vpe/text.hpp"

namespace vpe::layout {
namespace {

[[noreturn]] void fail(std::string_view src, std::size_t offset, const std::string& msg) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset && i < src.size(); ++i) {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  throw ParseError(msg, line, col);
}

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (const char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

// One `DESC '(' BODY ')'` entry.
struct Entry {
  std::string description;
  std::string_view body;
  std::size_t body_offset = 0;
};

std::vector<Entry> split_entries(std::string_view s, std::string_view what) {
  std::vector<Entry> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t start = pos;
    const std::size_t open = s.find('(', pos);
    const std::string_view desc_raw =
        s.substr(start, open == std::string_view::npos ? std::string_view::npos : open - start);
    const std::string_view desc = text::trim(desc_raw);
    if (open == std::string_view::npos) {
      if (!desc.empty()) {
        fail(s, start + (desc.data() - desc_raw.data()),
             "dangling description '" + std::string(desc) + "' without " + std::string(what));
      }
      break;
    }
    if (desc.empty()) fail(s, open, "missing description before '('");
    if (desc.find(')') != std::string_view::npos) {
      fail(s, start + desc_raw.find(')'), "unexpected ')'");
    }
    const std::size_t close = s.find(')', open + 1);
    if (close == std::string_view::npos) fail(s, open, "unclosed '('");
    const std::string_view body = s.substr(open + 1, close - open - 1);
    if (body.find('(') != std::string_view::npos) {
      fail(s, open + 1 + body.find('('), "nested '('");
    }
    out.push_back({collapse_spaces(desc), body, open + 1});
    pos = close + 1;
  }
  return out;
}

int parse_int(std::string_view src, std::string_view field, std::size_t offset,
              const std::string& what) {
  const std::string_view t = text::trim(field);
  int value = 0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc() || ptr != last || t.front() == '-' || t.front() == '+') {
    fail(src, offset, "non-integer " + what + " '" + std::string(t) + "'");
  }
  return value;
}

void check_description(const std::string& d) {
  if (text::trim(d).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty object description");
  }
  if (d.find_first_of("()") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "description contains parentheses: " + d);
  }
}

}  // namespace

constexpr double kSnapEpsilon = 1e-9;

int quantize(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "quantize expects a value in [0,1]");
  }
  // Decimal inputs such as 0.29 scale to 28.999...; snap them to the integer.
  double scaled = v * kBins;
  const double nearest = std::round(scaled);
  if (std::abs(scaled - nearest) < kSnapEpsilon) scaled = nearest;
  const int bin = static_cast<int>(std::floor(scaled));
  return bin > kBins - 1 ? kBins - 1 : bin;
}

double dequantize(int bin) {
  if (bin < 0 || bin >= kBins) {
    throw Error(ErrorCode::kOutOfRange, "bin " + std::to_string(bin) + " outside 0..99");
  }
  return (bin + 0.5) / kBins;
}

QuantizedBox quantize(const BBox& box) {
  check_box(box, "quantize");
  return {quantize(box.x1), quantize(box.y1), quantize(box.x2), quantize(box.y2)};
}

BBox dequantize(const QuantizedBox& b) {
  return {dequantize(b.x1), dequantize(b.y1), dequantize(b.x2), dequantize(b.y2)};
}

Parsed<std::vector<ObjectCount>> parse_object_counts(std::string_view s,
                                                     const CodecOptions& options) {
  Parsed<std::vector<ObjectCount>> out;
  for (const Entry& e : split_entries(s, "a count")) {
    if (text::trim(e.body).empty()) fail(s, e.body_offset, "missing count");
    const int count = parse_int(s, e.body, e.body_offset, "count");
    if (count < 1 || count > options.max_count) {
      const std::string msg = "count " + std::to_string(count) + " for '" + e.description +
                              "' outside [1, " + std::to_string(options.max_count) + "]";
      if (options.strict_counts) fail(s, e.body_offset, msg);
      out.warnings.push_back(msg);
    }
    out.value.push_back({e.description, count});
  }
  return out;
}

Parsed<std::vector<Placement>> parse_placements(std::string_view s) {
  Parsed<std::vector<Placement>> out;
  for (const Entry& e : split_entries(s, "a box")) {
    const auto fields = text::split(e.body, ',');
    if (fields.size() != 4) {
      fail(s, e.body_offset,
           "expected 4 coordinates, got " + std::to_string(fields.size()));
    }
    int v[4];
    std::size_t offset = e.body_offset;
    for (int i = 0; i < 4; ++i) {
      v[i] = parse_int(s, fields[i], offset, "coordinate");
      if (v[i] < 0 || v[i] >= kBins) {
        fail(s, offset, "bin " + std::to_string(v[i]) + " outside 0..99");
      }
      offset += fields[i].size() + 1;
    }
    const QuantizedBox box{v[0], v[1], v[2], v[3]};
    if (box.x2 < box.x1) fail(s, e.body_offset, "x2 < x1 for '" + e.description + "'");
    if (box.y2 < box.y1) fail(s, e.body_offset, "y2 < y1 for '" + e.description + "'");
    if (box.x1 == box.x2 || box.y1 == box.y2) {
      out.warnings.push_back("degenerate box for '" + e.description + "'");
    }
    out.value.push_back({e.description, box});
  }
  return out;
}

std::string print_object_counts(const std::vector<ObjectCount>& objects) {
  std::string out;
  for (const auto& o : objects) {
    check_description(o.description);
    if (!out.empty()) out += ' ';
    out += o.description + " (" + std::to_string(o.count) + ")";
  }
  return out;
}

std::string print_placements(const std::vector<Placement>& placements) {
  std::string out;
  for (const auto& p : placements) {
    check_description(p.description);
    const auto& b = p.box;
    for (const int v : {b.x1, b.y1, b.x2, b.y2}) {
      if (v < 0 || v >= kBins) throw Error(ErrorCode::kOutOfRange, "bin outside 0..99");
    }
    if (!out.empty()) out += ' ';
    out += p.description + " (" + std::to_string(b.x1) + "," + std::to_string(b.y1) + "," +
           std::to_string(b.x2) + "," + std::to_string(b.y2) + ")";
  }
  return out;
}

LayoutSpec validate_layout(std::vector<ObjectCount> objects, std::vector<Placement> placements) {
  std::map<std::string, int> expected;
  for (const auto& o : objects) expected[text::fold_label(o.description)] += o.count;
  std::map<std::string, int> actual;
  for (const auto& p : placements) {
    const std::string key = text::fold_label(p.description);
    if (!expected.contains(key)) {
      throw Error(ErrorCode::kUnknownDescription,
                  "placement for '" + p.description + "' not listed in objects");
    }
    ++actual[key];
  }
  for (const auto& o : objects) {
    const std::string key = text::fold_label(o.description);
    if (actual[key] != expected[key]) {
      throw Error(ErrorCode::kCountMismatch,
                  "'" + o.description + "': expected " + std::to_string(expected[key]) +
                      " placements, got " + std::to_string(actual[key]));
    }
  }
  return {std::move(objects), std::move(placements)};
}

std::vector<std::pair<std::string, BBox>> to_normalized(const LayoutSpec& spec) {
  std::vector<std::pair<std::string, BBox>> out;
  out.reserve(spec.placements.size());
  for (const auto& p : spec.placements) out.emplace_back(p.description, dequantize(p.box));
  return out;
}

}  // namespace vpe::layout
