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

#include <set>
#include <sstream>

#include "support.hpp"
#include "ued/report.hpp"

namespace ued {
namespace {

MetricRow row(const std::string& uid, const std::string& group, Dimension d, double avg,
              double var, std::optional<double> rise, std::optional<double> rec,
              double likes = 1.0) {
  MetricRow r;
  r.user_id = uid;
  r.group = group;
  r.dim = d;
  r.metrics.average = avg;
  r.metrics.variability = var;
  r.metrics.rise_rate = rise;
  r.metrics.recovery_rate = rec;
  r.metrics.n_displacements = 3;
  r.n_posts = 60;
  r.avg_likes = likes;
  return r;
}

// Three groups; "mdd" has a lower valence average and higher variability.
std::vector<MetricRow> synthetic_rows(std::uint64_t seed, std::size_t per_group = 40) {
  testing::Gen g(seed);
  std::vector<MetricRow> rows;
  for (const std::string grp : {"mdd", "control", "adhd"}) {
    for (std::size_t i = 0; i < per_group; ++i) {
      const std::string uid = grp + std::to_string(i);
      for (Dimension d : kAllDimensions) {
        const bool planted = grp == "mdd" && d == Dimension::kValence;
        const double avg = g.normal(planted ? -0.1 : 0.0, 0.05);
        const double var = g.normal(planted ? 0.3 : 0.2, 0.03);
        std::optional<double> rise, rec;
        if (g.coin(0.9)) rise = g.normal(0.05, 0.01);
        if (g.coin(0.9)) rec = g.normal(0.04, 0.01);
        rows.push_back(row(uid, grp, d, avg, var, rise, rec, g.uniform(0, 9)));
      }
    }
  }
  return rows;
}

TEST(MetricsCsv, RoundTripsWithAbsentRates) {
  std::vector<MetricRow> rows = {row("u,1", "control", Dimension::kArousal, 0.125, 0.5, 0.25, std::nullopt),
                                 row("u2", "adhd", Dimension::kValence, -0.1, 0.3, std::nullopt, 0.01)};
  std::stringstream ss;
  write_metrics_csv(ss, rows);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\r')),
            "user_id,group,dim,average,variability,rise_rate,recovery_rate,n_displacements,n_posts,avg_likes");
  const auto back = read_metrics_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].user_id, "u,1");
  EXPECT_EQ(back[0].dim, Dimension::kArousal);
  EXPECT_EQ(back[0].metrics.rise_rate, 0.25);
  EXPECT_FALSE(back[0].metrics.recovery_rate);
  EXPECT_FALSE(back[1].metrics.rise_rate);
  EXPECT_EQ(back[1].metrics.average, -0.1);

  std::stringstream bad("user_id,group\r\n");
  EXPECT_THROW(read_metrics_csv(bad), ParseError);
}

TEST(Analyze, FamiliesAndPairwiseExclusion) {
  const auto rows = synthetic_rows(1);
  AnalysisConfig cfg;
  const auto rep = analyze(rows, cfg);
  ASSERT_EQ(rep.families.size(), 12u);
  const auto* f = rep.find(Dimension::kValence, Metric::kRiseRate);
  ASSERT_NE(f, nullptr);
  ASSERT_EQ(f->groups.size(), 3u);
  EXPECT_EQ(f->groups[0].label, "adhd");
  EXPECT_EQ(f->groups[2].label, "mdd");
  std::size_t present = 0;
  for (const auto& r : rows) {
    if (r.group == "adhd" && r.dim == Dimension::kValence && r.metrics.rise_rate) ++present;
  }
  EXPECT_EQ(f->groups[0].n, present);
  EXPECT_LT(present, 40u);
  EXPECT_TRUE(f->levene && f->welch);
  EXPECT_EQ(f->posthoc.size(), 3u);

  const auto* avg = rep.find(Dimension::kValence, Metric::kAverage);
  EXPECT_LT(avg->welch->p_value, 1e-6);
}

TEST(Analyze, FailedFamilyRecordsError) {
  std::vector<MetricRow> rows;
  for (int i = 0; i < 5; ++i) {
    rows.push_back(row("c" + std::to_string(i), "control", Dimension::kValence, 0.1 * i, 0.2, 0.5, 0.1 * i));
    rows.push_back(row("m" + std::to_string(i), "mdd", Dimension::kValence, 0.2 * i, 0.2 + 0.01 * i, 0.5, 0.2 * i));
  }
  AnalysisConfig cfg;
  cfg.dimensions = {Dimension::kValence};
  const auto rep = analyze(rows, cfg);
  // Variability of control and rise rate everywhere are constant.
  const auto* rise = rep.find(Dimension::kValence, Metric::kRiseRate);
  EXPECT_FALSE(rise->welch);
  EXPECT_FALSE(rise->errors.empty());
  const auto summary = emit_direction_summary(rep, cfg.alpha);
  const auto* cell = summary.find("mdd", Metric::kRiseRate, Dimension::kValence);
  ASSERT_NE(cell, nullptr);
  EXPECT_FALSE(cell->direction);
  EXPECT_EQ(direction_label(cell->direction), "unavailable");
  EXPECT_THROW(analyze({}, cfg), Error);
}

TEST(StatsReport, JsonRoundTrip) {
  const auto rep = analyze(synthetic_rows(2), AnalysisConfig{});
  const auto j = stats_report_to_json(rep);
  const auto back = stats_report_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(stats_report_to_json(back), j);
}

TEST(StatsReport, OmnibusSchemas) {
  const auto rep = analyze(synthetic_rows(3), AnalysisConfig{});
  const auto j = stats_report_to_json(rep);
  const auto& fam = j.at("families").at(0);
  std::set<std::string> levene_keys, welch_keys;
  for (const auto& [k, v] : fam.at("levene").items()) levene_keys.insert(k);
  for (const auto& [k, v] : fam.at("welch").items()) welch_keys.insert(k);
  EXPECT_EQ(levene_keys, (std::set<std::string>{"df1", "df2", "F", "p"}));
  EXPECT_EQ(welch_keys, (std::set<std::string>{"df1", "df2", "F", "p", "est_omega_squared"}));

  std::stringstream lev, wel;
  write_levene_csv(lev, rep);
  write_welch_csv(wel, rep);
  std::vector<std::string> header;
  std::size_t line = 0;
  csv::read_row(lev, header, line);
  EXPECT_EQ(header, (std::vector<std::string>{"emotion", "ued_metric", "df1", "df2", "F", "p"}));
  csv::read_row(wel, header, line);
  EXPECT_EQ(header, (std::vector<std::string>{"emotion", "ued_metric", "df1", "df2", "F", "p",
                                              "est_omega_squared"}));
  std::size_t n = 0;
  while (csv::read_row(wel, header, line)) ++n;
  EXPECT_EQ(n, 12u);
}

TEST(DirectionSummary, FlagsPlantedCellsOnly) {
  const auto rep = analyze(synthetic_rows(4, 60), AnalysisConfig{});
  const auto s = emit_direction_summary(rep, 0.05);
  EXPECT_EQ(s.groups, (std::vector<std::string>{"adhd", "mdd"}));
  EXPECT_EQ(s.cells.size(), 24u);
  EXPECT_EQ(s.find("mdd", Metric::kAverage, Dimension::kValence)->direction, stats::Direction::kLower);
  EXPECT_EQ(s.find("mdd", Metric::kVariability, Dimension::kValence)->direction,
            stats::Direction::kHigher);
  EXPECT_LT(s.find("mdd", Metric::kAverage, Dimension::kValence)->mean_difference, 0.0);

  std::stringstream txt;
  write_direction_text(txt, s);
  EXPECT_NE(txt.str().find("↓"), std::string::npos);
  EXPECT_NE(txt.str().find("↑"), std::string::npos);

  std::stringstream md;
  write_mean_differences_csv(md, s);
  std::vector<std::string> fields;
  std::size_t line = 0;
  csv::read_row(md, fields, line);
  ASSERT_EQ(fields.size(), 13u);
  EXPECT_EQ(fields[0], "pair");
  EXPECT_EQ(fields[1], "average_valence");
  csv::read_row(md, fields, line);
  EXPECT_EQ(fields[0], "adhd--control");
  csv::read_row(md, fields, line);
  EXPECT_EQ(fields[0], "mdd--control");
  EXPECT_NE(fields[1], "--");
  EXPECT_LT(csv::parse_double(fields[1], line), 0.0);
}

TEST(DirectionSummary, MissingControlThrows) {
  auto rep = analyze(synthetic_rows(5), AnalysisConfig{});
  rep.control_group = "nobody";
  EXPECT_THROW(emit_direction_summary(rep, 0.05), Error);
}

TEST(Popularity, HalfOpenBinsSuppressionAndOverflow) {
  std::vector<MetricRow> rows;
  // likes 0, 1.999, 2, 2, 7.5, 8, 20
  const std::vector<double> likes = {0, 1.999, 2, 2, 7.5, 8, 20};
  for (std::size_t i = 0; i < likes.size(); ++i) {
    rows.push_back(row("u" + std::to_string(i), "control", Dimension::kValence,
                       static_cast<double>(i), 0.1, std::nullopt, 0.2, likes[i]));
  }
  AnalysisConfig cfg;
  cfg.min_users_per_bin = 2;
  const auto curves = stratify_by_popularity(rows, cfg);
  ASSERT_EQ(curves.size(), 4u);  // one group x four metrics x one dimension
  const auto& avg = curves[0];
  EXPECT_EQ(avg.metric, Metric::kAverage);
  ASSERT_EQ(avg.bins.size(), 4u);
  EXPECT_EQ(avg.bins[0].n_users, 2u);
  EXPECT_DOUBLE_EQ(*avg.bins[0].mean, 0.5);
  EXPECT_EQ(avg.bins[1].n_users, 2u);
  EXPECT_DOUBLE_EQ(*avg.bins[1].mean, 2.5);
  EXPECT_EQ(avg.bins[2].n_users, 0u);
  EXPECT_TRUE(avg.bins[2].suppressed);
  EXPECT_EQ(avg.bins[3].n_users, 1u);
  EXPECT_TRUE(avg.bins[3].suppressed);
  EXPECT_FALSE(avg.bins[3].mean);
  EXPECT_EQ(avg.overflow_count, 2u);
  EXPECT_DOUBLE_EQ(*avg.overflow_mean, 5.5);
  // Rise rate is absent for everyone.
  EXPECT_EQ(curves[2].n_speakers, 0u);

  std::stringstream ss;
  write_popularity_csv(ss, curves);
  EXPECT_NE(ss.str().find("suppressed"), std::string::npos);
  EXPECT_NE(ss.str().find("overflow"), std::string::npos);
}

}  // namespace
}  // namespace ued
