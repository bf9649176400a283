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
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "vpe/eval_dsl.hpp"

namespace vpe::gen {

struct Exemplar {
  std::string prompt;
  std::string program;
};

struct ExemplarSet {
  // Module documentation placed ahead of the exemplars.
  std::string header;
  std::vector<Exemplar> exemplars;

  // The 12 exemplars shipped with the library.
  static ExemplarSet bundled();
  // {"header": s, "exemplars": [{"prompt": s, "program": s}, ...]}
  static ExemplarSet load(const std::filesystem::path& path);
  // Throws when an exemplar program fails to parse or validate.
  void check() const;
};

struct GenConfig {
  // OpenAI-compatible base URL; $VPE_LLM_URL when empty.
  std::string endpoint;
  std::string model = "gpt-35-turbo";
  double temperature = 0.0;
  int max_retries = 2;
  // When set, completions come from this prompt -> completion JSON map and
  // no network access happens.
  std::filesystem::path offline_fixture;
  // One extra request when every statement of the first completion is invalid
  // (online mode only).
  bool reprompt_on_all_invalid = false;
  std::chrono::milliseconds min_request_interval{0};
  std::chrono::seconds timeout{60};

  void check() const;
};

struct RequestBuild {
  std::string text;
  std::vector<std::string> warnings;
};

/// Module docs, then one "Prompt: ...\nProgram:\n..." block per exemplar, then
/// the target prompt with an empty program slot.
RequestBuild build_icl_request(std::string_view prompt, const ExemplarSet& exemplars);

/// Source of raw completions for a request.
class CompletionSource {
 public:
  virtual ~CompletionSource() = default;
  virtual std::string complete(const std::string& prompt, const std::string& request) = 0;
};

class OfflineCompletions final : public CompletionSource {
 public:
  explicit OfflineCompletions(std::map<std::string, std::string> completions);
  static OfflineCompletions load(const std::filesystem::path& path);

  // Throws Error(kUnknownKey) when the prompt is not in the fixture.
  std::string complete(const std::string& prompt, const std::string& request) override;

 private:
  std::map<std::string, std::string> completions_;
};

/// Chat-completion client: POST {base}/chat/completions.
class ChatCompletions final : public CompletionSource {
 public:
  explicit ChatCompletions(GenConfig config);

  // Throws Error(kBackendUnavailable) after exhausting retries.
  std::string complete(const std::string& prompt, const std::string& request) override;

 private:
  GenConfig config_;
  std::string api_key_;
  std::mutex rate_mutex_;
  std::chrono::steady_clock::time_point last_request_{};
};

struct CleanedCompletion {
  // Statement candidates in completion order.
  std::vector<std::string> statements;
  // Non-program lines that were discarded.
  std::vector<std::string> prose;
};

/// Strips code fences, "Program:" labels and prose, then splits into
/// statements on ';' / newline outside strings and parentheses.
CleanedCompletion clean_completion(std::string_view completion);

struct GenResult {
  dsl::EvalProgram program;
  std::vector<dsl::Diagnostic> diagnostics;
  std::string completion;
};

/// Parses a completion, dropping invalid statements with a "dropped-statement"
/// diagnostic each. Throws Error(kGenerationFailed) when nothing survives.
GenResult repair_completion(std::string_view completion);

GenResult generate_program(const std::string& prompt, const ExemplarSet& exemplars,
                           CompletionSource& source, bool reprompt_on_all_invalid = false);

/// Offline fixture when configured, otherwise the chat endpoint.
std::unique_ptr<CompletionSource> make_source(const GenConfig& config);

struct Coverage {
  std::vector<std::string> content_words;
  std::vector<std::string> covered;
  std::vector<std::string> missing;
  double fraction = 1.0;
};

/// Which content words of the prompt (stopwords removed) appear among the
/// words of the program's string arguments.
Coverage coverage_stats(std::string_view prompt, const dsl::EvalProgram& program);

}  // namespace vpe::gen
