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

#ifndef UED_STATS_STUDENTIZED_RANGE_HPP_
#define UED_STATS_STUDENTIZED_RANGE_HPP_

// Upper tail of the studentized range distribution by direct quadrature of
//
//   P(Q > q) = int_0^inf f_S(s) [1 - P_k(q s)] ds,
//   P_k(w)   = k int phi(z) [Phi(z) - Phi(z - w)]^(k-1) dz,
//
// where S = chi_df / sqrt(df). Real-valued df (Welch-Satterthwaite) is
// supported; df above kInfiniteDf uses the normal-range limit directly.

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ued/error.hpp"
#include "ued/stats/quadrature.hpp"
#include "ued/stats/special.hpp"

namespace ued {
namespace stats {

namespace detail {

inline constexpr double kInfiniteDf = 1e9;
inline constexpr double kRangeInnerTol = 1e-13;
inline constexpr double kRangeOuterTol = 1e-10;
inline constexpr double kNormalSupport = 8.5;

[[noreturn]] inline void quadrature_failure(const char* stage, double q, int k,
                                            double df, double err) {
  std::ostringstream msg;
  msg << "studentized range quadrature did not converge in " << stage
      << " integral (q=" << q << ", k=" << k << ", df=" << df
      << ", error estimate=" << err << ")";
  throw NumericalError(msg.str());
}

// 1 - P_k(w): upper tail of the range of k standard normals.
inline double normal_range_upper_tail(double w, int k, double q, double df) {
  if (w <= 0.0) return 1.0;
  const double km1 = static_cast<double>(k - 1);
  auto integrand = [&](double z) {
    const double inner = normal_cdf(z) - normal_cdf(z - w);
    if (inner <= 0.0) return 0.0;
    return normal_pdf(z) * std::pow(inner, km1);
  };
  // The bracket peaks near z = w/2; split there so each piece is unimodal.
  const double split = std::clamp(0.5 * w, -kNormalSupport, kNormalSupport);
  const auto left = integrate(integrand, -kNormalSupport, split, 0.5 * kRangeInnerTol);
  const auto right = integrate(integrand, split, kNormalSupport, 0.5 * kRangeInnerTol);
  if (!left.converged || !right.converged) {
    quadrature_failure("inner", q, k, df, left.abs_error + right.abs_error);
  }
  const double p = k * (left.value + right.value);
  return std::clamp(1.0 - p, 0.0, 1.0);
}

// log density of S = chi_df / sqrt(df) at s = e^u, times the Jacobian s,
// up to the normalizing constant. Its maximum is 0 at u = 0 for every df.
inline double log_chi_kernel(double u, double df) {
  return df * u - 0.5 * df * std::expm1(2.0 * u);
}

}  // namespace detail

// P(Q > q) for the studentized range of k means with df degrees of freedom.
inline double studentized_range_upper_tail(double q, int k, double df) {
  if (std::isnan(q) || q < 0.0) {
    throw DomainError("studentized_range_upper_tail: q must be non-negative");
  }
  if (k < 2) throw DomainError("studentized_range_upper_tail: k must be >= 2");
  if (std::isnan(df) || !(df > 0.0)) {
    throw DomainError("studentized_range_upper_tail: df must be positive");
  }
  if (q == 0.0) return 1.0;
  if (std::isinf(q)) return 0.0;
  if (df >= detail::kInfiniteDf) {
    return detail::normal_range_upper_tail(q, k, q, df);
  }

  // Integrate in u = log s. Bounds put the kernel below e^-40 on the left
  // (where it decays like e^(df u)) and on the right.
  const double spread = 1.0 / std::sqrt(2.0 * df);
  const double lo = -std::max(16.0 * spread, 40.0 / df);
  const double hi = std::max(16.0 * spread, 0.5 * std::log1p(80.0 / df));

  auto density = [&](double u) {
    return std::exp(detail::log_chi_kernel(u, df));
  };
  auto weighted = [&](double u) {
    const double d = density(u);
    if (d == 0.0) return 0.0;
    return d * detail::normal_range_upper_tail(q * std::exp(u), k, q, df);
  };

  // Dividing by the integral of the same kernel over the same window keeps
  // the gamma-function constant out of the computation.
  const double tol = detail::kRangeOuterTol * (hi - lo);
  const auto norm_l = integrate(density, lo, 0.0, 0.5 * tol);
  const auto norm_r = integrate(density, 0.0, hi, 0.5 * tol);
  const auto num_l = integrate(weighted, lo, 0.0, 0.5 * tol);
  const auto num_r = integrate(weighted, 0.0, hi, 0.5 * tol);
  if (!norm_l.converged || !norm_r.converged || !num_l.converged ||
      !num_r.converged) {
    detail::quadrature_failure(
        "outer", q, k, df,
        (num_l.abs_error + num_r.abs_error) / (norm_l.value + norm_r.value));
  }
  const double p = (num_l.value + num_r.value) / (norm_l.value + norm_r.value);
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace stats
}  // namespace ued

#endif  // UED_STATS_STUDENTIZED_RANGE_HPP_
