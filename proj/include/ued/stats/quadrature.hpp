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

#ifndef UED_STATS_QUADRATURE_HPP_
#define UED_STATS_QUADRATURE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace ued {
namespace stats {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

// 15-point Kronrod nodes on [-1, 1] (non-negative half) with the embedded
// 7-point Gauss weights.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename Fn>
Segment kronrod15(Fn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]: the segment
// with the largest error estimate is bisected until the summed estimate
// falls below abs_tol (or below what rounding in the segment sums allows) or
// max_segments is reached.
template <typename Fn>
QuadratureResult integrate(Fn&& f, double a, double b, double abs_tol,
                           int max_segments = 2000) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::vector<detail::Segment> heap;
  heap.reserve(static_cast<std::size_t>(max_segments) + 1);
  heap.push_back(detail::kronrod15(f, a, b));
  out.evaluations = 15;

  // Exact re-summation; the running updates below drift by a few ulps.
  double magnitude = 0.0;
  auto resum = [&](double& total, double& error) {
    total = 0.0;
    error = 0.0;
    magnitude = 0.0;
    for (const auto& seg : heap) {
      total += seg.value;
      error += seg.error;
      magnitude += std::fabs(seg.value);
    }
  };
  auto done = [&](double error) {
    return error <= abs_tol ||
           error <= 50.0 * std::numeric_limits<double>::epsilon() * magnitude;
  };
  double total = 0.0;
  double error = 0.0;
  resum(total, error);
  while (static_cast<int>(heap.size()) < max_segments) {
    if (done(error)) {
      resum(total, error);
      if (done(error)) break;
    }
    std::pop_heap(heap.begin(), heap.end());
    const detail::Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    const detail::Segment left = detail::kronrod15(f, worst.a, mid);
    const detail::Segment right = detail::kronrod15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    magnitude += std::fabs(left.value) + std::fabs(right.value) - std::fabs(worst.value);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
  }
  resum(total, error);
  out.value = total;
  out.abs_error = error;
  out.converged = done(error);
  return out;
}

}  // namespace stats
}  // namespace ued

#endif  // UED_STATS_QUADRATURE_HPP_
