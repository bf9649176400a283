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
#include <span>
#include <string>
#include <vector>

namespace vpe::stats {

/// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman's rho as the Pearson correlation of average ranks. Returns
/// nullopt when either sequence is constant (rho undefined). Throws
/// Error(kInvalidArgument) on length mismatch or fewer than two pairs.
std::optional<double> spearman_rho(std::span<const double> x, std::span<const double> y);

/// Cohen's kappa with marginal-product chance agreement. When chance
/// agreement is 1 (both raters used one identical label) kappa is 1.
double cohen_kappa(std::span<const std::string> a, std::span<const std::string> b);

enum class Level { kNominal, kInterval };

/// raters x items; nullopt marks a missing rating.
using AnnotationMatrix = std::vector<std::vector<std::optional<double>>>;

/// Krippendorff's alpha from the coincidence matrix. Units with fewer than
/// two ratings are not pairable and are ignored. Returns 1 when every
/// pairable value is identical. Throws Error(kInsufficientData) when no unit
/// has two ratings.
double krippendorff_alpha(const AnnotationMatrix& ratings, Level level);

}  // namespace vpe::stats
