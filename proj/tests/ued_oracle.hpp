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

#ifndef UED_TESTS_UED_ORACLE_HPP_
#define UED_TESTS_UED_ORACLE_HPP_

// Brute-force reference for the arc metrics. Deliberately naive: every
// window is re-summed exactly, the band uses mean +/- sd directly, and
// excursions are found by labelling each index first and then scanning runs
// of equal labels.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ued::oracle {

__extension__ typedef __int128 Int128;

struct Metrics {
  double average = 0.0;
  double variability = 0.0;
  std::optional<double> rise;
  std::optional<double> recovery;
  std::size_t displacements = 0;
};

inline std::vector<double> arc(const std::vector<double>& scores, std::size_t window,
                               std::size_t step) {
  std::vector<double> out;
  // Window sums are exact: every score is a multiple of 2^-110 (checked),
  // summed as a 128-bit integer and rounded once.
  constexpr int kScale = 110;
  std::vector<Int128> fixed(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double m = std::ldexp(scores[i], kScale);
    if (m != std::trunc(m) || std::fabs(scores[i]) > 1024.0) {
      throw std::domain_error("score not representable in the oracle's fixed point");
    }
    fixed[i] = static_cast<Int128>(m);
  }
  for (std::size_t b = 0; b + window <= scores.size(); b += step) {
    Int128 s = 0;
    for (std::size_t k = b; k < b + window; ++k) s += fixed[k];
    out.push_back(std::ldexp(static_cast<double>(s), -kScale) / static_cast<double>(window));
  }
  return out;
}

inline Metrics metrics(const std::vector<double>& a) {
  const auto n = a.size();
  long double s = 0.0L;
  for (double v : a) s += v;
  const double mean = static_cast<double>(s / static_cast<long double>(n));
  long double ss = 0.0L;
  for (double v : a) ss += (static_cast<long double>(v) - mean) * (static_cast<long double>(v) - mean);
  const double sd = static_cast<double>(std::sqrt(ss / static_cast<long double>(n)));
  const double hi = mean + sd;
  const double lo = mean - sd;

  std::vector<int> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = a[i] > hi ? 1 : (a[i] < lo ? -1 : 0);

  Metrics m;
  m.average = mean;
  m.variability = sd;
  double rise_sum = 0.0, rec_sum = 0.0;
  int rise_n = 0, rec_n = 0;
  std::size_t i = 0;
  while (i < n) {
    if (label[i] == 0) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < n && label[end] == label[i]) ++end;
    std::size_t peak = i;
    for (std::size_t k = i; k < end; ++k) {
      if (std::fabs(a[k] - mean) > std::fabs(a[peak] - mean)) peak = k;
    }
    const double dist = label[i] > 0 ? a[peak] - hi : lo - a[peak];
    ++m.displacements;
    if (peak > i) {
      rise_sum += dist / static_cast<double>(peak - i);
      ++rise_n;
    }
    if (end < n && end - i > 1) {
      rec_sum += dist / static_cast<double>(end - peak);
      ++rec_n;
    }
    i = end;
  }
  if (rise_n) m.rise = rise_sum / rise_n;
  if (rec_n) m.recovery = rec_sum / rec_n;
  return m;
}

}  // namespace ued::oracle

#endif  // UED_TESTS_UED_ORACLE_HPP_
