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

#include "vpe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "vpe/error.hpp"

namespace vpe::stats {

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share rank mean((i+1)..(j+1)).
    const double rank = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "spearman: sequences differ in length");
  }
  if (x.size() < 2) throw Error(ErrorCode::kInvalidArgument, "spearman: need at least two pairs");
  for (const double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "spearman: non-finite value");
  }
  for (const double v : y) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "spearman: non-finite value");
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double cohen_kappa(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kInvalidArgument, "kappa: sequences differ in length");
  if (a.empty()) throw Error(ErrorCode::kInvalidArgument, "kappa: empty input");
  const double n = static_cast<double>(a.size());
  std::map<std::string, std::pair<double, double>> marginals;
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) agree += 1.0;
    marginals[a[i]].first += 1.0;
    marginals[b[i]].second += 1.0;
  }
  const double po = agree / n;
  double pe = 0.0;
  for (const auto& [label, m] : marginals) pe += (m.first / n) * (m.second / n);
  if (pe >= 1.0) return 1.0;
  return (po - pe) / (1.0 - pe);
}

double krippendorff_alpha(const AnnotationMatrix& ratings, Level level) {
  if (ratings.size() < 2) throw Error(ErrorCode::kInsufficientData, "alpha: need at least two raters");
  std::size_t items = 0;
  for (const auto& row : ratings) items = std::max(items, row.size());

  // Distinct values; coincidences o[c][k] over pairable units.
  std::vector<double> values;
  for (const auto& row : ratings) {
    for (const auto& v : row) {
      if (v) values.push_back(*v);
    }
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const std::size_t k = values.size();
  const auto index = [&](double v) {
    return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), v) - values.begin());
  };

  std::vector<double> coincidence(k * k, 0.0);
  for (std::size_t u = 0; u < items; ++u) {
    std::vector<std::size_t> unit;
    for (const auto& row : ratings) {
      if (u < row.size() && row[u]) unit.push_back(index(*row[u]));
    }
    if (unit.size() < 2) continue;
    const double weight = 1.0 / static_cast<double>(unit.size() - 1);
    for (std::size_t i = 0; i < unit.size(); ++i) {
      for (std::size_t j = 0; j < unit.size(); ++j) {
        if (i != j) coincidence[unit[i] * k + unit[j]] += weight;
      }
    }
  }

  std::vector<double> marginal(k, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) marginal[c] += coincidence[c * k + d];
    n += marginal[c];
  }
  if (n < 2.0) {
    throw Error(ErrorCode::kInsufficientData, "alpha: no item has ratings from two raters");
  }

  const auto delta2 = [&](std::size_t c, std::size_t d) {
    if (level == Level::kNominal) return c == d ? 0.0 : 1.0;
    const double diff = values[c] - values[d];
    return diff * diff;
  };
  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) {
      const double w = delta2(c, d);
      observed += coincidence[c * k + d] * w;
      expected += marginal[c] * marginal[d] * w;
    }
  }
  observed /= n;
  expected /= n * (n - 1.0);
  if (expected == 0.0) return 1.0;
  return 1.0 - observed / expected;
}

}  // namespace vpe::stats
