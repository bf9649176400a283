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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vpe/eval_dsl.hpp"
#include "vpe/eval_modules.hpp"
#include "vpe/perception.hpp"

namespace vpe {

struct EvalReport {
  std::string image;
  std::string prompt;
  // Canonical program text.
  std::string program;
  std::vector<ModuleResult> results;
  double score = 0.0;
  // Set when the exclude policy left no statement to average.
  bool no_scored_statements = false;
  EvalConfig config;
  // Optional tags carried through for grouping.
  std::string id;
  std::string skill;
  std::string model;

  bool has_errors() const;
};

/// Mean of per-statement scores under the error policy.
double aggregate_score(const std::vector<ModuleResult>& results, ErrorPolicy policy,
                       bool* no_scored_statements = nullptr);

EvalReport run_program(const PerceptionBackend& backend, const std::string& image,
                       const dsl::EvalProgram& program, const std::string& prompt,
                       const EvalConfig& config = {});

struct BatchItem {
  std::string image;
  dsl::EvalProgram program;
  std::string prompt;
  std::string id;
  std::string skill;
  std::string model;
};

struct BatchSummary {
  std::size_t reports = 0;
  // nullopt for an empty batch.
  std::optional<double> mean_score;
  std::map<std::string, double> per_skill;
  std::size_t errored_reports = 0;
};

struct BatchResult {
  std::vector<EvalReport> reports;
  BatchSummary summary;
};

/// Evaluates items on up to `parallelism` worker threads; reports come back
/// in input order.
BatchResult run_batch(const PerceptionBackend& backend, const std::vector<BatchItem>& items,
                      int parallelism, const EvalConfig& config = {});

BatchSummary summarize_batch(const std::vector<EvalReport>& reports);

nlohmann::json config_to_json(const EvalConfig& config);
nlohmann::json to_json(const ModuleResult& result);
nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const BatchSummary& summary);

/// Inverse of to_json(EvalReport); the call strings are re-parsed.
EvalReport report_from_json(const nlohmann::json& j);

}  // namespace vpe
