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

#include "vpe/program_runner.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "vpe/error.hpp"

namespace vpe {

using nlohmann::json;

bool EvalReport::has_errors() const {
  return std::any_of(results.begin(), results.end(),
                     [](const ModuleResult& r) { return r.errored; });
}

double aggregate_score(const std::vector<ModuleResult>& results, ErrorPolicy policy,
                       bool* no_scored_statements) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : results) {
    if (r.errored && policy == ErrorPolicy::kExclude) continue;
    sum += r.errored ? 0.0 : r.score;
    ++n;
  }
  if (no_scored_statements != nullptr) *no_scored_statements = n == 0;
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

EvalReport run_program(const PerceptionBackend& backend, const std::string& image,
                       const dsl::EvalProgram& program, const std::string& prompt,
                       const EvalConfig& config) {
  check_config(config);
  if (program.calls.empty()) throw Error(ErrorCode::kInvalidArgument, "program has no statements");
  EvalReport report;
  report.image = image;
  report.prompt = prompt;
  report.program = dsl::print_program(program);
  report.config = config;
  report.results.reserve(program.calls.size());
  for (const auto& call : program.calls) {
    report.results.push_back(execute_call(backend, image, call, config));
  }
  report.score =
      aggregate_score(report.results, config.error_policy, &report.no_scored_statements);
  return report;
}

BatchSummary summarize_batch(const std::vector<EvalReport>& reports) {
  BatchSummary s;
  s.reports = reports.size();
  if (reports.empty()) return s;
  double total = 0.0;
  std::map<std::string, std::pair<double, std::size_t>> skills;
  for (const auto& r : reports) {
    total += r.score;
    if (r.has_errors()) ++s.errored_reports;
    if (!r.skill.empty()) {
      auto& [sum, n] = skills[r.skill];
      sum += r.score;
      ++n;
    }
  }
  s.mean_score = total / static_cast<double>(reports.size());
  for (const auto& [skill, acc] : skills) {
    s.per_skill[skill] = acc.first / static_cast<double>(acc.second);
  }
  return s;
}

BatchResult run_batch(const PerceptionBackend& backend, const std::vector<BatchItem>& items,
                      int parallelism, const EvalConfig& config) {
  if (parallelism < 1) throw Error(ErrorCode::kInvalidArgument, "parallelism must be >= 1");
  check_config(config);
  for (const auto& item : items) {
    if (item.program.calls.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "batch item '" + item.id + "' has no statements");
    }
  }
  BatchResult out;
  out.reports.resize(items.size());

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      const BatchItem& item = items[i];
      EvalReport r = run_program(backend, item.image, item.program, item.prompt, config);
      r.id = item.id;
      r.skill = item.skill;
      r.model = item.model;
      out.reports[i] = std::move(r);
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(parallelism), items.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  out.summary = summarize_batch(out.reports);
  return out;
}

json config_to_json(const EvalConfig& config) {
  return {{"box_threshold", config.box_threshold},
          {"scale_tau", config.scale_tau},
          {"error_policy", std::string(error_policy_name(config.error_policy))}};
}

json to_json(const ModuleResult& result) {
  json annotations = json::array();
  for (const auto& a : result.annotations) {
    annotations.push_back({{"box", {a.box.x1, a.box.y1, a.box.x2, a.box.y2}},
                           {"label", a.label},
                           {"role", std::string(role_name(a.role))}});
  }
  return {{"call", dsl::print_call(result.call)},
          {"score", result.score},
          {"errored", result.errored},
          {"explanation", result.explanation},
          {"annotations", std::move(annotations)}};
}

json to_json(const EvalReport& report) {
  json results = json::array();
  for (const auto& r : report.results) results.push_back(to_json(r));
  json j = {{"image", report.image},
            {"prompt", report.prompt},
            {"program", report.program},
            {"score", report.score},
            {"results", std::move(results)},
            {"config", config_to_json(report.config)}};
  if (report.no_scored_statements) j["no_scored_statements"] = true;
  if (!report.id.empty()) j["id"] = report.id;
  if (!report.skill.empty()) j["skill"] = report.skill;
  if (!report.model.empty()) j["model"] = report.model;
  return j;
}

json to_json(const BatchSummary& summary) {
  json s = {{"reports", summary.reports},
            {"errored_reports", summary.errored_reports},
            {"mean_score", summary.mean_score ? json(*summary.mean_score) : json(nullptr)},
            {"undefined", !summary.mean_score.has_value()}};
  json skills = json::object();
  for (const auto& [k, v] : summary.per_skill) skills[k] = v;
  s["per_skill"] = std::move(skills);
  return {{"summary", std::move(s)}};
}

namespace {

Role role_from_name(const std::string& name) {
  for (const Role r : {Role::kSubject, Role::kReference, Role::kDetected, Role::kOcr}) {
    if (role_name(r) == name) return r;
  }
  throw Error(ErrorCode::kSchemaViolation, "unknown annotation role '" + name + "'");
}

}  // namespace

EvalReport report_from_json(const json& j) {
  try {
    EvalReport r;
    r.image = j.at("image").get<std::string>();
    r.prompt = j.at("prompt").get<std::string>();
    r.program = j.at("program").get<std::string>();
    r.score = j.at("score").get<double>();
    r.no_scored_statements = j.value("no_scored_statements", false);
    r.id = j.value("id", "");
    r.skill = j.value("skill", "");
    r.model = j.value("model", "");
    if (j.contains("config")) {
      const json& c = j.at("config");
      r.config.box_threshold = c.value("box_threshold", kDefaultBoxThreshold);
      r.config.scale_tau = c.value("scale_tau", 1.25);
      const auto policy = error_policy_from_name(c.value("error_policy", "count-as-zero"));
      if (!policy) throw Error(ErrorCode::kSchemaViolation, "unknown error_policy");
      r.config.error_policy = *policy;
    }
    for (const auto& rj : j.at("results")) {
      ModuleResult m;
      m.call = dsl::parse_program(rj.at("call").get<std::string>()).calls.at(0);
      m.score = rj.at("score").get<int>();
      m.errored = rj.at("errored").get<bool>();
      m.explanation = rj.at("explanation").get<std::string>();
      for (const auto& aj : rj.at("annotations")) {
        const auto& b = aj.at("box");
        Annotation a;
        a.box = {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
                 b.at(3).get<double>()};
        a.label = aj.at("label").get<std::string>();
        a.role = role_from_name(aj.at("role").get<std::string>());
        m.annotations.push_back(std::move(a));
      }
      r.results.push_back(std::move(m));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("report JSON: ") + e.what());
  }
}

}  // namespace vpe
