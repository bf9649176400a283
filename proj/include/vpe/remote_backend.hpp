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

#include <chrono>
#include <string_view>
#include <string>

#include "vpe/perception.hpp"

namespace vpe {

struct RemoteConfig {
  // e.g. "http://localhost:8080"; defaults to $VPE_BACKEND_URL when empty.
  std::string base_url;
  int max_retries = 2;
  std::chrono::milliseconds retry_backoff{200};
  std::chrono::seconds timeout{60};
};

/// Client for the perception service wire protocol:
///   POST /v1/objdet {image, query, box_threshold} -> {detections:[...]}
///   POST /v1/ocr    {image}                       -> {tokens:[...]}
///   POST /v1/vqa    {image, question, choices}    -> {answer, raw, projected}
///   GET  /v1/health                               -> {status, models}
/// Images are sent as base64 of the file bytes named by the image ref.
class RemoteBackend final : public PerceptionBackend {
 public:
  explicit RemoteBackend(RemoteConfig config);

  std::string name() const override { return "remote:" + config_.base_url; }
  const RemoteConfig& config() const { return config_; }

  // Returns the health "status" field; throws kBackendUnavailable when the
  // service cannot be reached.
  std::string health() const;

 protected:
  std::vector<Detection> detect(const std::string& image, const std::string& query,
                                double box_threshold) const override;
  std::vector<OcrToken> read_text(const std::string& image) const override;
  std::string answer(const std::string& image, const VqaQuery& query) const override;

 private:
  std::string post(const std::string& path, const std::string& body) const;

  RemoteConfig config_;
};

std::string base64_encode(std::string_view bytes);

}  // namespace vpe
