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

#include <string>
#include <string_view>
#include <vector>

namespace vpe {

/// Normalized xyxy box; coordinates lie in [0,1] with y growing downward.
struct BBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  double center_x() const { return (x1 + x2) / 2.0; }
  double center_y() const { return (y1 + y2) / 2.0; }

  bool operator==(const BBox&) const = default;
};

bool is_valid(const BBox& box);

// Throws Error(kSchemaViolation) naming `what` when the box is invalid.
void check_box(const BBox& box, std::string_view what);

struct Detection {
  std::string label;
  BBox box;
  double confidence = 0.0;
  // Larger means nearer the camera.
  double closeness = 0.0;

  bool operator==(const Detection&) const = default;
};

struct OcrToken {
  std::string text;
  BBox box;
  double confidence = 1.0;

  bool operator==(const OcrToken&) const = default;
};

struct VqaQuery {
  std::string question;
  std::vector<std::string> choices;
};

struct VqaAnswer {
  std::string answer;
  // Free text as produced by the model (or fixture) before projection.
  std::string raw;
  // False when the raw text matched no choice and `answer` fell back to the
  // first choice.
  bool projected = true;

  bool operator==(const VqaAnswer&) const = default;
};

// Throws Error(kInvalidArgument) unless the query has >= 2 choices that are
// pairwise distinct after normalization.
void check_query(const VqaQuery& query);

/// Maps free-form model output onto one of the choices. Exact normalized
/// match first, then a leading-word match ("yes, there is" -> "yes"); when
/// neither applies the first choice is returned with projected = false.
VqaAnswer project_answer(std::string_view raw,
                         const std::vector<std::string>& choices);

/// Orders detections by descending confidence, ties by ascending
/// (x1, y1, x2, y2).
bool detection_order(const Detection& a, const Detection& b);

inline constexpr double kDefaultBoxThreshold = 0.35;

/// Perception layer consumed by the evaluation modules. Implementations
/// supply the raw hooks; the public entry points enforce pre/postconditions
/// so every backend returns validated, filtered and ordered results.
/// Implementations must be safe to call concurrently.
class PerceptionBackend {
 public:
  virtual ~PerceptionBackend() = default;

  std::vector<Detection> obj_det(const std::string& image,
                                 const std::string& query,
                                 double box_threshold) const;
  std::vector<OcrToken> ocr(const std::string& image) const;
  VqaAnswer vqa(const std::string& image, const VqaQuery& query) const;

  virtual std::string name() const = 0;

 protected:
  virtual std::vector<Detection> detect(const std::string& image,
                                        const std::string& query,
                                        double box_threshold) const = 0;
  virtual std::vector<OcrToken> read_text(const std::string& image) const = 0;
  // Returns the unprojected answer text.
  virtual std::string answer(const std::string& image,
                             const VqaQuery& query) const = 0;
};

}  // namespace vpe
