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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "reference.hpp"
#include "support.hpp"
#include "ued/stats/anova.hpp"
#include "ued/stats/descriptive.hpp"
#include "ued/stats/quadrature.hpp"
#include "ued/stats/special.hpp"
#include "ued/stats/studentized_range.hpp"

namespace ued::stats {
namespace {

double rel_or_abs(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

TEST(Descriptive, Basics) {
  const std::vector<double> xs = {4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(mean(xs), 2.5);
  EXPECT_DOUBLE_EQ(sample_variance(xs), 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(median(xs), 2.5);
  EXPECT_DOUBLE_EQ(quantile_linear(xs, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile_linear(xs, 1.0), 4.0);
}

TEST(Quadrature, KnownIntegrals) {
  const auto r = integrate([](double x) { return std::exp(-x * x); }, -10, 10, 1e-13);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, std::sqrt(std::numbers::pi), 1e-13);
  const auto s = integrate([](double x) { return std::sqrt(x); }, 0, 1, 1e-12);
  EXPECT_NEAR(s.value, 2.0 / 3.0, 1e-11);
}

TEST(Special, ClosedFormTails) {
  // df1 = 2: P(F > f) = (df2 / (df2 + 2f))^(df2 / 2).
  for (double df2 : {1.0, 3.5, 10.0, 250.0}) {
    for (double f : {0.1, 1.0, 4.0, 30.0}) {
      EXPECT_NEAR(f_upper_tail(f, 2, df2), std::pow(df2 / (df2 + 2 * f), df2 / 2), 1e-13);
    }
  }
  // t with 1 and 2 degrees of freedom.
  for (double t : {0.2, 1.0, 3.0, 40.0}) {
    EXPECT_NEAR(t_two_sided(t, 1), 1 - 2 / std::numbers::pi * std::atan(t), 1e-13);
    EXPECT_NEAR(t_two_sided(t, 2), 1 - t / std::sqrt(2 + t * t), 1e-13);
  }
  EXPECT_EQ(f_upper_tail(0.0, 3, 7), 1.0);
  EXPECT_NEAR(incomplete_beta(0.3, 1, 1), 0.3, 1e-15);
  EXPECT_NEAR(incomplete_beta(0.5, 2.5, 2.5), 0.5, 1e-14);
}

TEST(Special, FTailMatchesIntegratedDensity) {
  testing::Gen g(5);
  for (int rep = 0; rep < 40; ++rep) {
    const double d1 = g.uniform(1, 30);
    const double d2 = g.uniform(2, 200);
    const double f = g.uniform(0.05, 8);
    const double logc = 0.5 * d1 * std::log(d1) + 0.5 * d2 * std::log(d2) -
                        (std::lgamma(d1 / 2) + std::lgamma(d2 / 2) - std::lgamma((d1 + d2) / 2));
    auto pdf = [&](double x) {
      if (x <= 0) return 0.0;
      return std::exp(logc + (d1 / 2 - 1) * std::log(x) - 0.5 * (d1 + d2) * std::log(d2 + d1 * x));
    };
    // Upper tail as 1 - CDF on [0, f] (the density is bounded there for d1 >= 2;
    // for d1 < 2 integrate the tail mapped onto (0, 1] instead).
    double want;
    if (d1 >= 2) {
      want = 1.0 - integrate(pdf, 0, f, 1e-14, 5000).value;
    } else {
      want = integrate([&](double u) { return u <= 0 ? 0.0 : pdf(f / u) * f / (u * u); }, 0, 1,
                       1e-14, 5000)
                 .value;
    }
    EXPECT_NEAR(f_upper_tail(f, d1, d2), want, 1e-9) << d1 << " " << d2 << " " << f;
  }
}

TEST(Special, ReferenceFTail) {
  const auto j = testing::reference_json().at("f_tail");
  EXPECT_NEAR(f_upper_tail(j.at("f"), j.at("df1"), j.at("df2")), j.at("p").get<double>(), 1e-14);
}

TEST(StudentizedRange, ReferenceValue) {
  const auto j = testing::reference_json().at("ptukey");
  EXPECT_NEAR(studentized_range_upper_tail(j.at("q"), j.at("k"), j.at("df")),
              j.at("scipy").get<double>(), 1e-10);
}

// For two groups the range is |difference| and q = |t| sqrt(2).
TEST(StudentizedRange, TwoGroupsReduceToT) {
  for (double df : {0.7, 1.0, 3.0, 12.5, 80.0, 1e4, 1e8, 1e12}) {
    for (double t : {0.1, 1.0, 2.5, 6.0}) {
      EXPECT_NEAR(studentized_range_upper_tail(t * std::sqrt(2.0), 2, df), t_two_sided(t, df),
                  1e-9)
          << df << " " << t;
    }
  }
}

TEST(StudentizedRange, MonotoneAndBounded) {
  for (int k : {2, 3, 5, 8, 20}) {
    for (double df : {2.0, 10.0, 100.0}) {
      double prev = 1.0;
      for (double q = 0.0; q <= 12.0; q += 0.5) {
        const double p = studentized_range_upper_tail(q, k, df);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, prev + 1e-12) << k << " " << df << " " << q;
        prev = p;
      }
    }
  }
  EXPECT_THROW(studentized_range_upper_tail(1.0, 1, 10), DomainError);
  EXPECT_THROW(studentized_range_upper_tail(1.0, 3, 0), DomainError);
  EXPECT_THROW(studentized_range_upper_tail(-1.0, 3, 10), DomainError);
}

TEST(Anova, MatchesReferenceDatasets) {
  for (const auto& d : testing::reference_datasets()) {
    SCOPED_TRACE(d.name);
    const auto lev = levene_test(d.groups);
    EXPECT_LT(rel_or_abs(lev.statistic, d.levene_w), 1e-12);
    EXPECT_NEAR(lev.p_value, d.levene_p, 1e-12);
    const auto w = welch_anova(d.groups);
    EXPECT_LT(rel_or_abs(w.f_statistic, d.welch_f), 1e-12);
    EXPECT_DOUBLE_EQ(w.df1, d.welch_df1);
    EXPECT_LT(rel_or_abs(w.df2, d.welch_df2), 1e-12);
    EXPECT_NEAR(w.p_value, d.welch_p, 1e-12);
    const auto gh = games_howell(d.groups);
    ASSERT_EQ(gh.size(), d.pairs.size());
    for (std::size_t i = 0; i < gh.size(); ++i) {
      EXPECT_EQ(gh[i].group_a, d.groups[d.pairs[i].a].label());
      EXPECT_EQ(gh[i].group_b, d.groups[d.pairs[i].b].label());
      EXPECT_NEAR(gh[i].mean_difference, d.pairs[i].mean_difference, 1e-12);
      EXPECT_LT(rel_or_abs(gh[i].t_statistic, d.pairs[i].t), 1e-12);
      EXPECT_LT(rel_or_abs(gh[i].df, d.pairs[i].df), 1e-12);
      EXPECT_NEAR(gh[i].p_adjusted, d.pairs[i].p, 1e-9);
    }
  }
}

TEST(Anova, BrownForsytheUsesMedians) {
  const std::vector<GroupSample> gs = {{"a", {1, 2, 3, 4, 100}}, {"b", {2, 3, 4, 5, 6}}};
  const auto mean_c = levene_test(gs, LeveneCenter::kMean);
  const auto med_c = levene_test(gs, LeveneCenter::kMedian);
  EXPECT_NE(mean_c.statistic, med_c.statistic);
  // |x - median| for a: 2 1 0 1 97, b: 2 1 0 1 2 -> one-way ANOVA on those.
  const std::vector<GroupSample> z = {{"a", {2, 1, 0, 1, 97}}, {"b", {2, 1, 0, 1, 2}}};
  const double za = 20.2, zb = 1.2, zg = 10.7;
  const double between = 5 * (za - zg) * (za - zg) + 5 * (zb - zg) * (zb - zg);
  double within = 0;
  for (double v : z[0].values()) within += (v - za) * (v - za);
  for (double v : z[1].values()) within += (v - zb) * (v - zb);
  EXPECT_NEAR(med_c.statistic, 8 * between / within, 1e-12);
}

TEST(Anova, Errors) {
  const std::vector<GroupSample> one = {{"a", {1, 2, 3}}};
  EXPECT_THROW(welch_anova(one), DomainError);
  const std::vector<GroupSample> flat = {{"a", {1, 2, 3}}, {"flat", {2, 2, 2}}};
  try {
    welch_anova(flat);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("flat"), std::string::npos);
  }
  EXPECT_NO_THROW(levene_test(flat));
  const std::vector<GroupSample> tiny = {{"a", {1}}, {"b", {2, 3}}};
  EXPECT_THROW(games_howell(tiny), DomainError);
  const std::vector<GroupSample> same = {{"a", {1, 1, 1}}, {"b", {2, 2, 2}}};
  const auto lev = levene_test(same);
  EXPECT_EQ(lev.statistic, 0.0);
  EXPECT_EQ(lev.p_value, 1.0);
}

TEST(AnovaProperty, GroupOrderDoesNotMatter) {
  testing::Gen g(8);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<GroupSample> gs;
    const auto k = g.integer(2, 6);
    for (std::int64_t i = 0; i < k; ++i) gs.push_back(g.group("g" + std::to_string(i)));
    auto shuffled = gs;
    std::shuffle(shuffled.begin(), shuffled.end(), g.engine());
    EXPECT_NEAR(welch_anova(gs).f_statistic, welch_anova(shuffled).f_statistic, 1e-9);
    EXPECT_NEAR(levene_test(gs).statistic, levene_test(shuffled).statistic, 1e-9);
    const auto a = games_howell(gs);
    const auto b = games_howell(shuffled);
    for (const auto& c : a) {
      const auto it = std::find_if(b.begin(), b.end(), [&](const PosthocComparison& x) {
        return (x.group_a == c.group_a && x.group_b == c.group_b) ||
               (x.group_a == c.group_b && x.group_b == c.group_a);
      });
      ASSERT_NE(it, b.end());
      EXPECT_NEAR(it->p_adjusted, c.p_adjusted, 1e-12);
    }
  }
}

TEST(AnovaProperty, AffineInvariance) {
  testing::Gen g(9);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<GroupSample> gs, moved;
    const double shift = g.uniform(-50, 50);
    const double scale = g.uniform(0.1, 20);
    for (int i = 0; i < 4; ++i) {
      auto s = g.group("g" + std::to_string(i), 5, 30);
      std::vector<double> v(s.values().begin(), s.values().end());
      for (auto& x : v) x = x * scale + shift;
      moved.emplace_back(s.label(), v);
      gs.push_back(std::move(s));
    }
    const auto a = welch_anova(gs);
    const auto b = welch_anova(moved);
    EXPECT_NEAR(a.f_statistic, b.f_statistic, 1e-8 * std::max(1.0, a.f_statistic));
    EXPECT_NEAR(a.df2, b.df2, 1e-8 * a.df2);
    EXPECT_NEAR(levene_test(gs).statistic, levene_test(moved).statistic, 1e-8);
  }
}

TEST(AnovaProperty, KTwoIdentities) {
  testing::Gen g(10);
  for (int rep = 0; rep < 50; ++rep) {
    const std::vector<GroupSample> gs = {g.group("a"), g.group("b")};
    const auto w = welch_anova(gs);
    const auto t = welch_t_test(gs[0], gs[1]);
    EXPECT_NEAR(w.f_statistic, t.t * t.t, 1e-9 * std::max(1.0, w.f_statistic));
    EXPECT_NEAR(w.df2, t.df, 1e-9 * t.df);
    EXPECT_NEAR(games_howell(gs)[0].p_adjusted, t.p_two_sided, 1e-6);
  }
}

TEST(Posthoc, SwappedFlipsSigns) {
  const std::vector<GroupSample> gs = {{"a", {1, 2, 3, 4}}, {"b", {5, 6, 7, 9}}};
  const auto c = games_howell(gs).at(0);
  EXPECT_TRUE(c.significant);
  EXPECT_EQ(c.direction, Direction::kLower);
  const auto s = c.swapped();
  EXPECT_EQ(s.group_a, "b");
  EXPECT_EQ(s.direction, Direction::kHigher);
  EXPECT_EQ(s.mean_difference, -c.mean_difference);
  EXPECT_EQ(s.p_adjusted, c.p_adjusted);
}

TEST(EffectSize, Thresholds) {
  EXPECT_EQ(interpret_effect_size(0.0), EffectSize::kVerySmall);
  EXPECT_EQ(interpret_effect_size(0.0099), EffectSize::kVerySmall);
  EXPECT_EQ(interpret_effect_size(0.01), EffectSize::kSmall);
  EXPECT_EQ(interpret_effect_size(0.0331), EffectSize::kSmall);
  EXPECT_EQ(interpret_effect_size(0.06), EffectSize::kMedium);
  EXPECT_EQ(interpret_effect_size(0.14), EffectSize::kLarge);
  EXPECT_THROW(interpret_effect_size(-0.1), DomainError);
  EXPECT_EQ(to_string(EffectSize::kVerySmall), "very small");
  EXPECT_EQ(welch_omega_squared(0.5, 3, 100), 0.0);
  EXPECT_NEAR(welch_omega_squared(70.30, 7, 14166), 0.0331, 5e-5);
}

}  // namespace
}  // namespace ued::stats
