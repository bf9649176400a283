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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vpe/eval_dsl.hpp"
#include "vpe/perception.hpp"
#include "vpe/relations.hpp"

namespace vpe {

enum class ErrorPolicy {
  // Errored statements score 0 and stay in the mean.
  kCountAsZero,
  // Errored statements are left out of the mean.
  kExclude,
};

std::string_view error_policy_name(ErrorPolicy p);
std::optional<ErrorPolicy> error_policy_from_name(std::string_view name);

struct EvalConfig {
  double box_threshold = kDefaultBoxThreshold;
  // Area-ratio tolerance for scale relations.
  double scale_tau = 1.25;
  ErrorPolicy error_policy = ErrorPolicy::kCountAsZero;
};

// Throws Error(kOutOfRange) when a threshold is outside its valid range.
void check_config(const EvalConfig& config);

enum class Role { kSubject, kReference, kDetected, kOcr };
std::string_view role_name(Role r);

struct Annotation {
  BBox box;
  std::string label;
  Role role = Role::kDetected;

  bool operator==(const Annotation&) const = default;
};

struct ModuleResult {
  dsl::ModuleCall call;
  int score = 0;
  bool errored = false;
  std::string explanation;
  std::vector<Annotation> annotations;
};

/// Strict trichotomy on the area ratio: bigger iff ratio > tau, smaller iff
/// ratio < 1/tau, otherwise same (boundaries included in same).
ScaleRelation classify_scale(double ratio, double tau);

/// Outcome of a geometric comparison; nullopt when the comparison is a tie.
std::optional<bool> compare_spatial(SpatialRelation rel, const Detection& subject,
                                    const Detection& reference);

/// Sorts OCR tokens into reading order: line bands by y-center with a
/// tolerance of half the median token height, then left to right.
std::vector<OcrToken> reading_order(std::vector<OcrToken> tokens);

ModuleResult object_eval(const PerceptionBackend& backend, const std::string& image,
                         const std::string& object, const EvalConfig& config = {});
ModuleResult count_eval(const PerceptionBackend& backend, const std::string& image,
                        const std::string& object, const CountExpr& expr,
                        const EvalConfig& config = {});
ModuleResult spatial_eval(const PerceptionBackend& backend, const std::string& image,
                          const std::string& subject, const std::string& reference,
                          const std::string& relation, const EvalConfig& config = {});
ModuleResult scale_eval(const PerceptionBackend& backend, const std::string& image,
                        const std::string& subject, const std::string& reference,
                        const std::string& relation, const EvalConfig& config = {});
ModuleResult text_eval(const PerceptionBackend& backend, const std::string& image,
                       const std::string& target, const EvalConfig& config = {});
ModuleResult vqa_eval(const PerceptionBackend& backend, const std::string& image,
                      const std::string& question, const std::string& choices,
                      const std::string& expected, const EvalConfig& config = {});

/// Dispatches one parsed statement. Backend failures never escape: they
/// produce an errored result with score 0.
ModuleResult execute_call(const PerceptionBackend& backend, const std::string& image,
                          const dsl::ModuleCall& call, const EvalConfig& config = {});

}  // namespace vpe
