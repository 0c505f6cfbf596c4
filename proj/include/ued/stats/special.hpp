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

#ifndef UED_STATS_SPECIAL_HPP_
#define UED_STATS_SPECIAL_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "ued/error.hpp"
#include "ued/stats/quadrature.hpp"

namespace ued {
namespace stats {

namespace detail {

constexpr int kMaxContinuedFractionTerms = 100000;
constexpr double kTiny = 1e-300;

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
// Converges quickly for x < (a + 1) / (a + b + 2).
inline double beta_continued_fraction(double a, double b, double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxContinuedFractionTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= eps) return h;
  }
  std::ostringstream msg;
  msg << "incomplete beta continued fraction did not converge (a=" << a
      << ", b=" << b << ", x=" << x << ")";
  throw NumericalError(msg.str());
}

}  // namespace detail

namespace detail {

// lgamma(x) - Stirling's approximation, for x >= 10.
inline double lgamma_correction(double x) {
  const double x2 = 1.0 / (x * x);
  return (1.0 / 12.0 +
          x2 * (-1.0 / 360.0 +
                x2 * (1.0 / 1260.0 +
                      x2 * (-1.0 / 1680.0 + x2 * (1.0 / 1188.0))))) /
         x;
}

}  // namespace detail

// log B(a, b). The Stirling-corrected branches avoid the cancellation of
// three large lgamma values when either argument is big.
inline double log_beta(double a, double b) {
  constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;
  const double p = std::min(a, b);
  const double q = std::max(a, b);
  if (p >= 10.0) {
    const double corr = detail::lgamma_correction(p) +
                        detail::lgamma_correction(q) -
                        detail::lgamma_correction(p + q);
    return -0.5 * std::log(q) + kLogSqrt2Pi + corr +
           (p - 0.5) * std::log(p / (p + q)) + q * std::log1p(-p / (p + q));
  }
  if (q >= 10.0) {
    const double corr =
        detail::lgamma_correction(q) - detail::lgamma_correction(p + q);
    return std::lgamma(p) + corr + p - p * std::log(p + q) +
           (q - 0.5) * std::log1p(-p / (p + q));
  }
  return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

// Regularized incomplete beta I_x(a, b) with y = 1 - x supplied separately,
// so callers that know the complement exactly (x near 1) lose nothing to the
// subtraction.
inline double incomplete_beta(double x, double y, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("incomplete_beta: shape parameters must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0)) {
    throw DomainError("incomplete_beta: x must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (y == 0.0) return 1.0;
  const double log_x = x <= 0.5 ? std::log(x) : std::log1p(-y);
  const double log_y = y <= 0.5 ? std::log(y) : std::log1p(-x);
  const double front = std::exp(a * log_x + b * log_y - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * detail::beta_continued_fraction(b, a, y) / b;
}

inline double incomplete_beta(double x, double a, double b) {
  return incomplete_beta(x, 1.0 - x, a, b);
}

namespace detail {

// Above this df2 the continued fraction for I_x(df2/2, df1/2) loses digits:
// x is within ~1/df2 of 1 and the result moves by about df2/2 times any
// rounding in x.
inline constexpr double kLargeDf2 = 1e7;

// P(df1 F > w) by quadrature of the density of W = df1 F,
//   df2^-b w^(b-1) (1 + w/df2)^-(a+b) / B(a, b),  a = df2/2, b = df1/2,
// which stays well conditioned for any df2.
inline double f_tail_by_quadrature(double w, double df1, double df2) {
  const double a = df2 / 2.0;
  const double b = df1 / 2.0;
  const double log_norm = -b * std::log(df2) - log_beta(a, b);
  auto log_density_core = [&](double x) {  // without the w^(b-1) factor
    return log_norm - (a + b) * std::log1p(x / df2);
  };
  auto refine = [](auto&& g, double lo, double hi) {
    const double coarse = integrate(g, lo, hi, 1e-8).value;
    const auto r = integrate(g, lo, hi, std::max(1e-300, 1e-14 * std::fabs(coarse)), 4000);
    if (!r.converged) throw NumericalError("F tail quadrature did not converge");
    return r.value;
  };
  if (w < df1) {
    // Lower tail in v = w^b, which absorbs the w^(b-1) singularity at 0.
    auto g = [&](double v) {
      if (v <= 0.0) return std::exp(log_density_core(0.0)) / b;
      return std::exp(log_density_core(std::pow(v, 1.0 / b))) / b;
    };
    return std::clamp(1.0 - refine(g, 0.0, std::pow(w, b)), 0.0, 1.0);
  }
  // Upper tail in u = w / x on (0, 1].
  auto g = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double x = w / u;
    return std::exp(log_density_core(x) + (b - 1.0) * std::log(x)) * w / (u * u);
  };
  return std::clamp(refine(g, 0.0, 1.0), 0.0, 1.0);
}

}  // namespace detail

// P(F > f) for F ~ F(df1, df2).
inline double f_upper_tail(double f, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0) || std::isnan(df1) || std::isnan(df2)) {
    throw DomainError("f_upper_tail: degrees of freedom must be positive");
  }
  if (std::isinf(df2)) {
    throw DomainError("f_upper_tail: df2 must be finite");
  }
  if (std::isnan(f) || f < 0.0) {
    throw DomainError("f_upper_tail: statistic must be non-negative");
  }
  if (f == 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  if (df2 > detail::kLargeDf2) return detail::f_tail_by_quadrature(df1 * f, df1, df2);
  // x = df2 / (df2 + df1 f) and y = 1 - x are both formed directly.
  const double denom = df2 + df1 * f;
  const double x = df2 / denom;
  const double y = df1 * f / denom;
  const double a = df2 / 2.0;
  const double b = df1 / 2.0;
  if (x < (a + 1.0) / (a + b + 2.0)) return incomplete_beta(x, y, a, b);
  return 1.0 - incomplete_beta(y, x, b, a);
}

// Two-sided P(|T| > |t|) for Student's t with df degrees of freedom.
inline double t_two_sided(double t, double df) {
  return f_upper_tail(t * t, 1.0, df);
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * M_SQRT1_2);
}

inline double normal_pdf(double x) {
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

}  // namespace stats
}  // namespace ued

#endif  // UED_STATS_SPECIAL_HPP_
