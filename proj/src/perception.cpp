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

#include "vpe/perception.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "vpe/error.hpp"
#include "vpe/text.hpp"

namespace vpe {

bool is_valid(const BBox& b) {
  const auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  return in_unit(b.x1) && in_unit(b.y1) && in_unit(b.x2) && in_unit(b.y2) &&
         b.x1 <= b.x2 && b.y1 <= b.y2;
}

void check_box(const BBox& b, std::string_view what) {
  if (is_valid(b)) return;
  std::string reason = "coordinates must lie in [0,1]";
  if (b.x2 < b.x1) reason = "x2 < x1";
  else if (b.y2 < b.y1) reason = "y2 < y1";
  throw Error(ErrorCode::kSchemaViolation,
              std::string(what) + ": invalid box (" + reason + ")");
}

void check_query(const VqaQuery& query) {
  if (text::trim(query.question).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "vqa question is empty");
  }
  if (query.choices.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "vqa needs at least two choices");
  }
  std::set<std::string> seen;
  for (const auto& c : query.choices) {
    const std::string n = text::normalize(c);
    if (n.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "vqa choice is empty");
    }
    if (!seen.insert(n).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate vqa choice '" + c + "'");
    }
  }
}

VqaAnswer project_answer(std::string_view raw,
                         const std::vector<std::string>& choices) {
  VqaAnswer out;
  out.raw = std::string(raw);
  const std::string norm = text::normalize(raw);
  for (const auto& c : choices) {
    if (text::normalize(c) == norm) {
      out.answer = c;
      return out;
    }
  }
  const auto w = text::words(norm);
  if (!w.empty()) {
    for (const auto& c : choices) {
      if (text::normalize(c) == w.front()) {
        out.answer = c;
        return out;
      }
    }
  }
  out.answer = choices.empty() ? std::string() : choices.front();
  out.projected = false;
  return out;
}

bool detection_order(const Detection& a, const Detection& b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  return std::tie(a.box.x1, a.box.y1, a.box.x2, a.box.y2) <
         std::tie(b.box.x1, b.box.y1, b.box.x2, b.box.y2);
}

std::vector<Detection> PerceptionBackend::obj_det(const std::string& image,
                                                  const std::string& query,
                                                  double box_threshold) const {
  if (text::trim(query).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "objdet query is empty");
  }
  if (!(box_threshold >= 0.0 && box_threshold <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "box_threshold must lie in [0,1]");
  }
  std::vector<Detection> found = detect(image, query, box_threshold);
  std::vector<Detection> kept;
  kept.reserve(found.size());
  for (auto& d : found) {
    check_box(d.box, "objdet detection for '" + query + "'");
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      throw Error(ErrorCode::kSchemaViolation, "objdet confidence outside [0,1]");
    }
    if (!(std::isfinite(d.closeness) && d.closeness >= 0.0)) {
      throw Error(ErrorCode::kSchemaViolation, "objdet closeness must be finite and >= 0");
    }
    if (d.confidence >= box_threshold) {
      d.label = query;
      kept.push_back(std::move(d));
    }
  }
  std::sort(kept.begin(), kept.end(), detection_order);
  return kept;
}

std::vector<OcrToken> PerceptionBackend::ocr(const std::string& image) const {
  std::vector<OcrToken> tokens = read_text(image);
  std::erase_if(tokens, [](const OcrToken& t) { return text::trim(t.text).empty(); });
  for (const auto& t : tokens) check_box(t.box, "ocr token '" + t.text + "'");
  return tokens;
}

VqaAnswer PerceptionBackend::vqa(const std::string& image, const VqaQuery& query) const {
  check_query(query);
  return project_answer(answer(image, query), query.choices);
}

}  // namespace vpe
