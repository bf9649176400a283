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
#include <utility>
#include <vector>

#include "vpe/perception.hpp"

// Text codec for the two-step layout language:
//   step 1 (objects/counts):  "dog (2) frisbee (1)"
//   step 2 (placements):      "dog (10,40,45,90) dog (55,42,88,88) frisbee (..)"
// Coordinates in step 2 are 100-bin quantized normalized xyxy values.
namespace vpe::layout {

inline constexpr int kBins = 100;
inline constexpr int kDefaultMaxCount = 7;

struct ObjectCount {
  std::string description;
  int count = 1;

  bool operator==(const ObjectCount&) const = default;
};

struct QuantizedBox {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  bool operator==(const QuantizedBox&) const = default;
};

struct Placement {
  std::string description;
  QuantizedBox box;

  bool operator==(const Placement&) const = default;
};

struct LayoutSpec {
  std::vector<ObjectCount> objects;
  std::vector<Placement> placements;

  bool operator==(const LayoutSpec&) const = default;
};

struct CodecOptions {
  int max_count = kDefaultMaxCount;
  // When false, counts outside [1, max_count] become warnings.
  bool strict_counts = true;
};

template <typename T>
struct Parsed {
  T value;
  std::vector<std::string> warnings;
};

int quantize(double v);
double dequantize(int bin);

QuantizedBox quantize(const BBox& box);
BBox dequantize(const QuantizedBox& box);

Parsed<std::vector<ObjectCount>> parse_object_counts(std::string_view s,
                                                     const CodecOptions& options = {});
// Degenerate boxes (x1 == x2 or y1 == y2) are accepted with a warning.
Parsed<std::vector<Placement>> parse_placements(std::string_view s);

std::string print_object_counts(const std::vector<ObjectCount>& objects);
std::string print_placements(const std::vector<Placement>& placements);

/// Checks that every description's placement multiplicity equals its count.
/// Descriptions are compared case-insensitively with whitespace collapsed;
/// placements may interleave descriptions in any order.
LayoutSpec validate_layout(std::vector<ObjectCount> objects, std::vector<Placement> placements);

std::vector<std::pair<std::string, BBox>> to_normalized(const LayoutSpec& spec);

}  // namespace vpe::layout
