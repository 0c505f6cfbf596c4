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

#ifndef UED_STATS_ANOVA_HPP_
#define UED_STATS_ANOVA_HPP_

// Group comparisons for heteroscedastic samples: Levene's test, Welch's
// one-way ANOVA with an omega-squared effect size, and Games-Howell
// pairwise comparisons.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ued/error.hpp"
#include "ued/stats/descriptive.hpp"
#include "ued/stats/special.hpp"
#include "ued/stats/studentized_range.hpp"

namespace ued {
namespace stats {

// One group's values for a single metric (one value per speaker).
class GroupSample {
 public:
  GroupSample(std::string label, std::vector<double> values)
      : label_(std::move(label)), values_(std::move(values)) {
    if (!values_.empty()) mean_ = stats::mean(values_);
    if (values_.size() >= 2) variance_ = stats::sample_variance(values_);
  }

  const std::string& label() const { return label_; }
  std::span<const double> values() const { return values_; }
  std::size_t n() const { return values_.size(); }
  double mean() const { return mean_; }
  double variance() const { return variance_; }

 private:
  std::string label_;
  std::vector<double> values_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

struct LeveneResult {
  double df1 = 0.0;
  double df2 = 0.0;
  double statistic = 0.0;
  double p_value = 1.0;
};

struct WelchResult {
  double df1 = 0.0;
  double df2 = 0.0;
  double f_statistic = 0.0;
  double p_value = 1.0;
  double omega_squared = 0.0;
};

enum class Direction { kHigher, kLower, kNone };

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::kHigher: return "higher";
    case Direction::kLower: return "lower";
    case Direction::kNone: break;
  }
  return "none";
}

struct PosthocComparison {
  std::string group_a;
  std::string group_b;
  double mean_difference = 0.0;  // mean(a) - mean(b)
  double t_statistic = 0.0;
  double df = 0.0;
  double p_adjusted = 1.0;
  bool significant = false;
  Direction direction = Direction::kNone;  // of a relative to b

  // The same comparison read from b's side.
  PosthocComparison swapped() const {
    PosthocComparison s = *this;
    std::swap(s.group_a, s.group_b);
    s.mean_difference = -mean_difference;
    s.t_statistic = -t_statistic;
    if (direction == Direction::kHigher) s.direction = Direction::kLower;
    else if (direction == Direction::kLower) s.direction = Direction::kHigher;
    return s;
  }
};

enum class LeveneCenter { kMean, kMedian };

enum class EffectSize { kVerySmall, kSmall, kMedium, kLarge };

inline std::string_view to_string(EffectSize e) {
  switch (e) {
    case EffectSize::kVerySmall: return "very small";
    case EffectSize::kSmall: return "small";
    case EffectSize::kMedium: return "medium";
    case EffectSize::kLarge: return "large";
  }
  return "very small";
}

namespace detail {

inline void require_groups(std::span<const GroupSample> groups,
                           bool positive_variance) {
  if (groups.size() < 2) throw DomainError("need at least two groups");
  for (const auto& g : groups) {
    if (g.n() < 2) {
      throw DomainError("group '" + g.label() + "' has fewer than 2 values");
    }
    if (positive_variance && !(g.variance() > 0.0)) {
      throw DomainError("group '" + g.label() + "' has zero variance");
    }
  }
}

}  // namespace detail

// Levene's test for equal variances. Deviations are taken from each group's
// mean by default (the classic form) or its median (Brown-Forsythe).
inline LeveneResult levene_test(std::span<const GroupSample> groups,
                                LeveneCenter center = LeveneCenter::kMean) {
  detail::require_groups(groups, false);
  const std::size_t k = groups.size();
  std::size_t total = 0;
  std::vector<std::vector<double>> z(k);
  std::vector<double> zbar(k);
  double zsum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto xs = groups[i].values();
    const double c = center == LeveneCenter::kMean
                         ? groups[i].mean()
                         : median(std::vector<double>(xs.begin(), xs.end()));
    z[i].reserve(xs.size());
    for (double x : xs) z[i].push_back(std::fabs(x - c));
    zbar[i] = mean(z[i]);
    for (double v : z[i]) zsum += v;
    total += xs.size();
  }
  const double zgrand = zsum / static_cast<double>(total);
  double between = 0.0;
  double within = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    between += static_cast<double>(z[i].size()) * (zbar[i] - zgrand) * (zbar[i] - zgrand);
    for (double v : z[i]) within += (v - zbar[i]) * (v - zbar[i]);
  }
  LeveneResult r;
  r.df1 = static_cast<double>(k - 1);
  r.df2 = static_cast<double>(total - k);
  if (within == 0.0) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  r.statistic = (r.df2 / r.df1) * between / within;
  r.p_value = f_upper_tail(r.statistic, r.df1, r.df2);
  return r;
}

// df1 (F - 1) / (df1 (F - 1) + N), clamped at zero.
inline double welch_omega_squared(double f, double df1, double total_n) {
  const double num = df1 * (f - 1.0);
  if (!(num > 0.0)) return 0.0;
  return num / (num + total_n);
}

// Welch's heteroscedastic one-way ANOVA.
inline WelchResult welch_anova(std::span<const GroupSample> groups) {
  detail::require_groups(groups, true);
  const double k = static_cast<double>(groups.size());
  double wsum = 0.0;
  double wmean = 0.0;
  double total_n = 0.0;
  std::vector<double> w(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    w[i] = static_cast<double>(groups[i].n()) / groups[i].variance();
    wsum += w[i];
    wmean += w[i] * groups[i].mean();
    total_n += static_cast<double>(groups[i].n());
  }
  wmean /= wsum;
  double a = 0.0;
  double lambda = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double d = groups[i].mean() - wmean;
    a += w[i] * d * d;
    const double u = 1.0 - w[i] / wsum;
    lambda += u * u / static_cast<double>(groups[i].n() - 1);
  }
  a /= (k - 1.0);
  const double b = 1.0 + (2.0 * (k - 2.0) / (k * k - 1.0)) * lambda;

  WelchResult r;
  r.df1 = k - 1.0;
  r.f_statistic = a / b;
  r.df2 = (k * k - 1.0) / (3.0 * lambda);
  r.p_value = f_upper_tail(r.f_statistic, r.df1, r.df2);
  r.omega_squared = welch_omega_squared(r.f_statistic, r.df1, total_n);
  return r;
}

struct WelchTTest {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
};

// Unequal-variance two-sample t-test with Welch-Satterthwaite df.
inline WelchTTest welch_t_test(const GroupSample& a, const GroupSample& b) {
  const GroupSample pair[] = {a, b};
  detail::require_groups(pair, true);
  const double va = a.variance() / static_cast<double>(a.n());
  const double vb = b.variance() / static_cast<double>(b.n());
  WelchTTest r;
  r.t = (a.mean() - b.mean()) / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) /
         (va * va / static_cast<double>(a.n() - 1) +
          vb * vb / static_cast<double>(b.n() - 1));
  r.p_two_sided = t_two_sided(r.t, r.df);
  return r;
}

// Games-Howell comparisons for all k(k-1)/2 unordered pairs (i < j, in
// input order).
inline std::vector<PosthocComparison> games_howell(
    std::span<const GroupSample> groups, double alpha = 0.05) {
  detail::require_groups(groups, true);
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const int k = static_cast<int>(groups.size());
  std::vector<PosthocComparison> out;
  out.reserve(groups.size() * (groups.size() - 1) / 2);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      const auto& a = groups[i];
      const auto& b = groups[j];
      const double va = a.variance() / static_cast<double>(a.n());
      const double vb = b.variance() / static_cast<double>(b.n());
      PosthocComparison c;
      c.group_a = a.label();
      c.group_b = b.label();
      c.mean_difference = a.mean() - b.mean();
      c.t_statistic = c.mean_difference / std::sqrt(va + vb);
      c.df = (va + vb) * (va + vb) /
             (va * va / static_cast<double>(a.n() - 1) +
              vb * vb / static_cast<double>(b.n() - 1));
      const double q = std::fabs(c.t_statistic) * M_SQRT2;
      c.p_adjusted = std::min(1.0, studentized_range_upper_tail(q, k, c.df));
      c.significant = c.p_adjusted < alpha;
      if (c.significant) {
        c.direction = c.mean_difference > 0.0   ? Direction::kHigher
                      : c.mean_difference < 0.0 ? Direction::kLower
                                                : Direction::kNone;
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

// Thresholds: < 0.01 very small, [0.01, 0.06) small, [0.06, 0.14) medium,
// >= 0.14 large.
inline EffectSize interpret_effect_size(double omega_squared) {
  if (std::isnan(omega_squared) || omega_squared < 0.0) {
    throw DomainError("effect size must be non-negative");
  }
  if (omega_squared < 0.01) return EffectSize::kVerySmall;
  if (omega_squared < 0.06) return EffectSize::kSmall;
  if (omega_squared < 0.14) return EffectSize::kMedium;
  return EffectSize::kLarge;
}

}  // namespace stats
}  // namespace ued

#endif  // UED_STATS_ANOVA_HPP_
