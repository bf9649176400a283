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

#include "vpe/program_gen.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "http_client.hpp"
#include "vpe/error.hpp"
#include "vpe/relations.hpp"
#include "vpe/text.hpp"

namespace vpe::gen {
namespace {

using nlohmann::json;

constexpr std::string_view kBundledExemplars =
#include "default_exemplars.inc"
    ;

ExemplarSet exemplars_from_json(const json& j) {
  try {
    ExemplarSet set;
    set.header = j.at("header").get<std::string>();
    for (const auto& e : j.at("exemplars")) {
      set.exemplars.push_back({e.at("prompt").get<std::string>(), e.at("program").get<std::string>()});
    }
    return set;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("exemplar file: ") + e.what());
  }
}

bool looks_like_statement(std::string_view s) {
  std::size_t i = 0;
  const auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  while (i < s.size() && ident(s[i])) ++i;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return i < s.size() && s[i] == '(';
}

std::string_view strip_label(std::string_view s) {
  s = text::trim(s);
  constexpr std::string_view kLabel = "program:";
  if (s.size() >= kLabel.size()) {
    std::string head(s.substr(0, kLabel.size()));
    std::transform(head.begin(), head.end(), head.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (head == kLabel) s = text::trim(s.substr(kLabel.size()));
  }
  return s;
}

// Scans `s` from the current lexical state; returns top-level ';' offsets.
struct ScanState {
  bool in_string = false;
  int depth = 0;
};

std::vector<std::size_t> scan(std::string_view s, ScanState& st) {
  std::vector<std::size_t> splits;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (st.in_string) {
      if (c == '\'') {
        if (i + 1 < s.size() && s[i + 1] == '\'') {
          ++i;
        } else {
          st.in_string = false;
        }
      }
      continue;
    }
    if (c == '\'') st.in_string = true;
    else if (c == '(') ++st.depth;
    else if (c == ')') st.depth = std::max(0, st.depth - 1);
    else if (c == ';' && st.depth == 0) splits.push_back(i);
  }
  return splits;
}

const std::set<std::string, std::less<>> kStopwords = {
    "a",    "an",   "the",  "of",   "in",    "on",   "at",   "to",    "is",   "are",
    "was",  "be",   "and",  "or",   "with",  "that", "this", "it",    "its",  "by",
    "for",  "from", "as",   "into", "onto",  "there", "their", "his", "her",  "some",
    "which", "who", "while", "has", "have",  "s",
};

std::string stem(std::string w) {
  if (w.size() > 4 && w.ends_with("ies")) return w.substr(0, w.size() - 3) + "y";
  for (const char* suffix : {"ches", "shes", "xes", "ses"}) {
    if (w.size() > 4 && w.ends_with(suffix)) return w.substr(0, w.size() - 2);
  }
  if (w.size() > 3 && w.ends_with('s') && !w.ends_with("ss")) return w.substr(0, w.size() - 1);
  return w;
}

int number_value(const std::string& w) {
  static const std::vector<std::string> kNumbers = {"zero", "one", "two",   "three", "four", "five",
                                                    "six",  "seven", "eight", "nine", "ten"};
  for (std::size_t i = 0; i < kNumbers.size(); ++i) {
    if (w == kNumbers[i] || w == std::to_string(i)) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

ExemplarSet ExemplarSet::bundled() { return exemplars_from_json(json::parse(kBundledExemplars)); }

ExemplarSet ExemplarSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open exemplars " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("exemplar file: ") + e.what());
  }
  ExemplarSet set = exemplars_from_json(j);
  set.check();
  return set;
}

void ExemplarSet::check() const {
  for (const auto& e : exemplars) {
    const auto program = dsl::parse_program(e.program);
    if (dsl::has_errors(dsl::validate_semantics(program))) {
      throw Error(ErrorCode::kInvalidArgument, "exemplar program for '" + e.prompt + "' is invalid");
    }
  }
}

void GenConfig::check() const {
  if (temperature < 0.0) throw Error(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  if (max_retries < 0) throw Error(ErrorCode::kInvalidArgument, "max_retries must be >= 0");
}

RequestBuild build_icl_request(std::string_view prompt, const ExemplarSet& exemplars) {
  RequestBuild out;
  out.text = exemplars.header;
  out.text += "\n\n";
  if (exemplars.exemplars.empty()) out.warnings.push_back("no in-context exemplars");
  for (const auto& e : exemplars.exemplars) {
    out.text += "Prompt: " + e.prompt + "\nProgram:\n" +
                dsl::print_program(dsl::parse_program(e.program)) + "\n\n";
  }
  out.text += "Prompt: " + std::string(prompt) + "\nProgram:\n";
  return out;
}

OfflineCompletions::OfflineCompletions(std::map<std::string, std::string> completions)
    : completions_(std::move(completions)) {}

OfflineCompletions OfflineCompletions::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open completion fixture " + path.string());
  try {
    const json j = json::parse(in);
    std::map<std::string, std::string> m;
    for (const auto& [k, v] : j.items()) m.emplace(k, v.get<std::string>());
    return OfflineCompletions(std::move(m));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("completion fixture: ") + e.what());
  }
}

std::string OfflineCompletions::complete(const std::string& prompt, const std::string&) {
  const auto it = completions_.find(prompt);
  if (it == completions_.end()) {
    throw Error(ErrorCode::kUnknownKey, "offline fixture has no completion for '" + prompt + "'");
  }
  return it->second;
}

ChatCompletions::ChatCompletions(GenConfig config) : config_(std::move(config)) {
  config_.check();
  if (config_.endpoint.empty()) {
    if (const char* env = std::getenv("VPE_LLM_URL")) config_.endpoint = env;
  }
  if (config_.endpoint.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no LLM endpoint (flag or VPE_LLM_URL)");
  }
  if (const char* key = std::getenv("VPE_LLM_KEY")) api_key_ = key;
}

std::string ChatCompletions::complete(const std::string&, const std::string& request) {
  {
    std::lock_guard lock(rate_mutex_);
    const auto now = std::chrono::steady_clock::now();
    const auto ready = last_request_ + config_.min_request_interval;
    if (now < ready) std::this_thread::sleep_until(ready);
    last_request_ = std::chrono::steady_clock::now();
  }
  const json body = {{"model", config_.model},
                     {"messages", json::array({{{"role", "user"}, {"content", request}}})},
                     {"temperature", config_.temperature}};
  detail::Headers headers;
  if (!api_key_.empty()) headers.emplace_back("Authorization", "Bearer " + api_key_);
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(250 * attempt));
    const auto res =
        detail::http_post_json(config_.endpoint, "/chat/completions", body.dump(), headers, config_.timeout);
    if (res.status == 200) {
      try {
        return json::parse(res.body).at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kSchemaViolation, std::string("chat response: ") + e.what());
      }
    }
    last_error = res.status == 0 ? res.error : "HTTP " + std::to_string(res.status);
    if (res.status >= 400 && res.status < 500 && res.status != 429) break;
  }
  throw Error(ErrorCode::kBackendUnavailable, "chat endpoint failed: " + last_error);
}

CleanedCompletion clean_completion(std::string_view completion) {
  CleanedCompletion out;
  std::vector<std::string> lines;
  for (auto& line : text::split(completion, '\n')) {
    if (text::trim(line).starts_with("```")) continue;
    lines.push_back(std::move(line));
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = strip_label(lines[i]);
    if (line.empty()) continue;
    if (!looks_like_statement(line)) {
      out.prose.emplace_back(line);
      continue;
    }
    // Join continuation lines while a string or call is still open.
    std::string stmt(line);
    ScanState st;
    std::vector<std::size_t> splits = scan(stmt, st);
    while ((st.in_string || st.depth > 0) && i + 1 < lines.size()) {
      const std::size_t base = stmt.size() + 1;
      stmt += '\n';
      stmt += lines[++i];
      for (const std::size_t s : scan(std::string_view(lines[i]), st)) splits.push_back(base + s);
    }
    std::size_t start = 0;
    splits.push_back(stmt.size());
    for (const std::size_t end : splits) {
      const std::string_view piece = text::trim(std::string_view(stmt).substr(start, end - start));
      start = end + 1;
      if (piece.empty()) continue;
      if (looks_like_statement(piece)) out.statements.emplace_back(piece);
      else out.prose.emplace_back(piece);
    }
  }
  return out;
}

GenResult repair_completion(std::string_view completion) {
  GenResult out;
  out.completion = std::string(completion);
  const CleanedCompletion cleaned = clean_completion(completion);
  for (const auto& p : cleaned.prose) {
    out.diagnostics.push_back({dsl::Severity::kInfo, "ignored-text", "ignored non-program text: " + p, 0, {}});
  }
  for (const auto& stmt : cleaned.statements) {
    try {
      dsl::EvalProgram single = dsl::parse_program(stmt);
      const auto diags = dsl::validate_semantics(single);
      if (dsl::has_errors(diags)) {
        std::string why;
        for (const auto& d : diags) {
          if (d.severity == dsl::Severity::kError) why = d.message;
        }
        out.diagnostics.push_back(
            {dsl::Severity::kWarning, "dropped-statement", "dropped '" + stmt + "': " + why, 0, {}});
        continue;
      }
      for (auto& call : single.calls) {
        for (auto d : diags) {
          d.statement = out.program.calls.size();
          out.diagnostics.push_back(std::move(d));
        }
        out.program.calls.push_back(std::move(call));
      }
    } catch (const ParseError& e) {
      out.diagnostics.push_back(
          {dsl::Severity::kWarning, "dropped-statement", "dropped '" + stmt + "': " + e.detail(), 0, {}});
    }
  }
  if (out.program.calls.empty()) {
    throw Error(ErrorCode::kGenerationFailed, "completion contains no valid statement");
  }
  out.program.source = dsl::print_program(out.program);
  return out;
}

GenResult generate_program(const std::string& prompt, const ExemplarSet& exemplars,
                           CompletionSource& source, bool reprompt_on_all_invalid) {
  const RequestBuild request = build_icl_request(prompt, exemplars);
  std::vector<dsl::Diagnostic> warnings;
  for (const auto& w : request.warnings) {
    warnings.push_back({dsl::Severity::kWarning, "request", w, 0, {}});
  }
  const auto attempt = [&](const std::string& req) {
    GenResult r = repair_completion(source.complete(prompt, req));
    r.diagnostics.insert(r.diagnostics.begin(), warnings.begin(), warnings.end());
    return r;
  };
  try {
    return attempt(request.text);
  } catch (const Error& e) {
    if (!reprompt_on_all_invalid || e.code() != ErrorCode::kGenerationFailed) throw;
  }
  return attempt(request.text +
                 "Use only the modules listed above, one statement per line, no other text.\n");
}

std::unique_ptr<CompletionSource> make_source(const GenConfig& config) {
  config.check();
  if (!config.offline_fixture.empty()) {
    return std::make_unique<OfflineCompletions>(OfflineCompletions::load(config.offline_fixture));
  }
  return std::make_unique<ChatCompletions>(config);
}

Coverage coverage_stats(std::string_view prompt, const dsl::EvalProgram& program) {
  std::set<std::string> arg_stems;
  std::set<int> counts;
  for (const auto& call : program.calls) {
    for (std::size_t i = 1; i < call.args.size(); ++i) {
      for (const auto& w : text::words(call.arg(i))) arg_stems.insert(stem(w));
    }
    if (call.module == dsl::Module::kCountEval) {
      if (const auto expr = parse_count_expr(call.arg(2))) counts.insert(expr->operand);
    }
  }
  Coverage c;
  std::set<std::string> seen;
  for (const auto& w : text::words(prompt)) {
    if (kStopwords.contains(w) || !seen.insert(w).second) continue;
    c.content_words.push_back(w);
    const int n = number_value(w);
    const bool hit = arg_stems.contains(stem(w)) || (n >= 0 && counts.contains(n));
    (hit ? c.covered : c.missing).push_back(w);
  }
  c.fraction = c.content_words.empty()
                   ? 1.0
                   : static_cast<double>(c.covered.size()) / static_cast<double>(c.content_words.size());
  return c;
}

}  // namespace vpe::gen
