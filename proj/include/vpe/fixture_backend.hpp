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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vpe/perception.hpp"

namespace vpe {

enum class FixtureMode {
  // Unknown images/queries yield empty results (vqa: unprojected answer).
  kLenient,
  // Unknown images/queries raise Error(kImageNotFound / kUnknownKey).
  kStrict,
};

/// Deterministic backend answering purely from a JSON document:
///
///   {"images": {"<image-ref>": {
///       "objdet": {"<query>": [{"box":[x1,y1,x2,y2], "confidence":f, "closeness":f}]},
///       "ocr":    [{"text":s, "box":[...], "confidence":f}],
///       "vqa":    {"<question>": "<answer>"}}}}
///
/// Immutable after construction.
class FixtureBackend final : public PerceptionBackend {
 public:
  struct Scene {
    std::map<std::string, std::vector<Detection>> objdet;
    std::vector<OcrToken> ocr;
    std::map<std::string, std::string> vqa;
  };

  explicit FixtureBackend(std::map<std::string, Scene> scenes,
                          FixtureMode mode = FixtureMode::kLenient);

  // Parse errors report line/column; schema violations name the field path.
  static FixtureBackend from_json(std::string_view document,
                                  FixtureMode mode = FixtureMode::kLenient);
  static FixtureBackend load(const std::filesystem::path& path,
                             FixtureMode mode = FixtureMode::kLenient);

  std::string name() const override { return "fixture"; }
  FixtureMode mode() const { return mode_; }
  const std::map<std::string, Scene>& scenes() const { return scenes_; }

 protected:
  std::vector<Detection> detect(const std::string& image, const std::string& query,
                                double box_threshold) const override;
  std::vector<OcrToken> read_text(const std::string& image) const override;
  std::string answer(const std::string& image, const VqaQuery& query) const override;

 private:
  const Scene* find_scene(const std::string& image) const;

  std::map<std::string, Scene> scenes_;
  FixtureMode mode_;
};

}  // namespace vpe
