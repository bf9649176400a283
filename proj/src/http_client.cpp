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

#include "http_client.hpp"

#include <httplib.h>

namespace vpe::detail {
namespace {

std::atomic<std::size_t> g_requests{0};

struct Target {
  std::string origin;
  std::string prefix;
};

Target split_url(const std::string& url) {
  const auto scheme = url.find("://");
  const auto host_start = scheme == std::string::npos ? 0 : scheme + 3;
  const auto slash = url.find('/', host_start);
  if (slash == std::string::npos) return {url, ""};
  std::string prefix = url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, slash), prefix};
}

HttpResponse convert(const httplib::Result& res) {
  HttpResponse out;
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.status = res->status;
  out.body = res->body;
  return out;
}

}  // namespace

HttpResponse http_post_json(const std::string& url, const std::string& path,
                            const std::string& body, const Headers& headers,
                            std::chrono::seconds timeout) {
  ++g_requests;
  const Target target = split_url(url);
  httplib::Client client(target.origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  return convert(client.Post(target.prefix + path, h, body, "application/json"));
}

HttpResponse http_get(const std::string& url, const std::string& path,
                      std::chrono::seconds timeout) {
  ++g_requests;
  const Target target = split_url(url);
  httplib::Client client(target.origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  return convert(client.Get(target.prefix + path));
}

std::size_t network_request_count() { return g_requests.load(); }

}  // namespace vpe::detail
