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

#include <atomic>
#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace vpe::detail {

struct HttpResponse {
  // 0 when no response was received (connection failure, timeout).
  int status = 0;
  std::string body;
  std::string error;
};

using Headers = std::vector<std::pair<std::string, std::string>>;

// `url` is scheme://host[:port][/prefix]; `path` is appended to the prefix.
HttpResponse http_post_json(const std::string& url, const std::string& path,
                            const std::string& body, const Headers& headers,
                            std::chrono::seconds timeout);

HttpResponse http_get(const std::string& url, const std::string& path,
                      std::chrono::seconds timeout);

// Number of outbound requests attempted by this process.
std::size_t network_request_count();

}  // namespace vpe::detail
