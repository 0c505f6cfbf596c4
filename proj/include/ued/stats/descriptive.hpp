// Copyright 2026 The UED Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UED_STATS_DESCRIPTIVE_HPP_
#define UED_STATS_DESCRIPTIVE_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "ued/error.hpp"

namespace ued {
namespace stats {

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("mean of an empty sample");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

// Sample variance (n - 1 denominator), two-pass.
inline double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw DomainError("sample variance needs n >= 2");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

// Quantile by linear interpolation between closest ranks: h = (n - 1) p,
// Q = x[floor h] + (h - floor h) (x[floor h + 1] - x[floor h]).
inline double quantile_linear(std::vector<double> xs, double p) {
  if (xs.empty()) throw DomainError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile p outside [0, 1]");
  std::sort(xs.begin(), xs.end());
  const double h = (static_cast<double>(xs.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

inline double median(std::vector<double> xs) {
  return quantile_linear(std::move(xs), 0.5);
}

}  // namespace stats
}  // namespace ued

#endif  // UED_STATS_DESCRIPTIVE_HPP_
