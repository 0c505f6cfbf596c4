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

#ifndef UED_REPORT_HPP_
#define UED_REPORT_HPP_

// Cohort comparison over per-speaker metrics: the Levene / Welch /
// Games-Howell battery per (dimension, metric), the direction summary of
// every group against the control group, and popularity-binned curves.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ued/arc.hpp"
#include "ued/config.hpp"
#include "ued/csv.hpp"
#include "ued/dynamics.hpp"
#include "ued/error.hpp"
#include "ued/lexicon.hpp"
#include "ued/parallel.hpp"
#include "ued/stats/anova.hpp"
#include "ued/timeline.hpp"

namespace ued {

enum class Metric { kAverage = 0, kVariability, kRiseRate, kRecoveryRate };

inline constexpr std::array<Metric, 4> kAllMetrics = {
    Metric::kAverage, Metric::kVariability, Metric::kRiseRate, Metric::kRecoveryRate};

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::kAverage: return "average";
    case Metric::kVariability: return "variability";
    case Metric::kRiseRate: return "rise_rate";
    case Metric::kRecoveryRate: return "recovery_rate";
  }
  return "";
}

// Row labels used in the printed tables.
inline std::string_view display_name(Metric m) {
  switch (m) {
    case Metric::kAverage: return "average emotion";
    case Metric::kVariability: return "emotional variability";
    case Metric::kRiseRate: return "rise rate";
    case Metric::kRecoveryRate: return "recovery rate";
  }
  return "";
}

inline Metric parse_metric(std::string_view s) {
  for (Metric m : kAllMetrics) {
    if (s == to_string(m)) return m;
  }
  throw Error("unknown metric: " + std::string(s));
}

inline std::optional<double> metric_value(const UedMetrics& m, Metric which) {
  switch (which) {
    case Metric::kAverage: return m.average;
    case Metric::kVariability: return m.variability;
    case Metric::kRiseRate: return m.rise_rate;
    case Metric::kRecoveryRate: return m.recovery_rate;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Per-speaker metrics

// One line of the per-speaker metrics file.
struct MetricRow {
  std::string user_id;
  std::string group;
  Dimension dim = Dimension::kValence;
  UedMetrics metrics;
  std::size_t n_posts = 0;
  double avg_likes = 0.0;
};

struct MetricsResult {
  std::vector<SpeakerUed> speakers;  // timeline order
  std::vector<Exclusion> exclusions;
};

// speaker_ued over all timelines in parallel; output order follows input.
inline MetricsResult compute_metrics(const std::vector<SpeakerTimeline>& timelines,
                                     const Lexicon& lexicon, const UedConfig& config) {
  std::vector<std::variant<SpeakerUed, Exclusion>> results(timelines.size());
  parallel_for(timelines.size(), [&](std::size_t i) {
    results[i] = speaker_ued(timelines[i], lexicon, config);
  });
  MetricsResult out;
  for (auto& r : results) {
    if (auto* s = std::get_if<SpeakerUed>(&r)) out.speakers.push_back(std::move(*s));
    else out.exclusions.push_back(std::get<Exclusion>(std::move(r)));
  }
  return out;
}

inline std::vector<MetricRow> metric_rows(const std::vector<SpeakerUed>& speakers,
                                          const std::vector<Dimension>& dims) {
  std::vector<MetricRow> rows;
  rows.reserve(speakers.size() * dims.size());
  for (const auto& s : speakers) {
    for (Dimension d : dims) {
      rows.push_back({s.user_id, s.group, d, s.at(d), s.n_posts, s.avg_likes});
    }
  }
  return rows;
}

inline const std::vector<std::string>& metrics_csv_header() {
  static const std::vector<std::string> h = {
      "user_id",       "group",           "dim",         "average",   "variability",
      "rise_rate",     "recovery_rate",   "n_displacements", "n_posts", "avg_likes"};
  return h;
}

inline void write_metrics_csv(std::ostream& os, const std::vector<MetricRow>& rows) {
  csv::write_row(os, metrics_csv_header());
  for (const auto& r : rows) {
    csv::write_row(os, {r.user_id, r.group, std::string(to_string(r.dim)),
                        csv::format_double(r.metrics.average),
                        csv::format_double(r.metrics.variability),
                        csv::format_optional(r.metrics.rise_rate),
                        csv::format_optional(r.metrics.recovery_rate),
                        std::to_string(r.metrics.n_displacements), std::to_string(r.n_posts),
                        csv::format_double(r.avg_likes)});
  }
}

inline std::vector<MetricRow> read_metrics_csv(std::istream& in) {
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!csv::read_row(in, fields, line) || fields != metrics_csv_header()) {
    throw ParseError("metrics file header does not match", 1);
  }
  std::vector<MetricRow> rows;
  while (csv::read_row(in, fields, line)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != metrics_csv_header().size()) {
      throw ParseError("expected " + std::to_string(metrics_csv_header().size()) + " fields", line);
    }
    MetricRow r;
    r.user_id = fields[0];
    r.group = fields[1];
    r.dim = parse_dimension(fields[2]);
    r.metrics.average = csv::parse_double(fields[3], line);
    r.metrics.variability = csv::parse_double(fields[4], line);
    r.metrics.rise_rate = csv::parse_optional(fields[5], line);
    r.metrics.recovery_rate = csv::parse_optional(fields[6], line);
    r.metrics.n_displacements = static_cast<std::size_t>(csv::parse_double(fields[7], line));
    r.n_posts = static_cast<std::size_t>(csv::parse_double(fields[8], line));
    r.avg_likes = csv::parse_double(fields[9], line);
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Statistical battery

struct GroupSummary {
  std::string label;
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
};

// Results for one (dimension, metric) family. Speakers lacking the metric
// (absent rise or recovery rate) are left out of this family only.
struct FamilyResult {
  Dimension dim = Dimension::kValence;
  Metric metric = Metric::kAverage;
  std::vector<GroupSummary> groups;  // sorted by label
  std::optional<stats::LeveneResult> levene;
  std::optional<stats::WelchResult> welch;
  std::vector<stats::PosthocComparison> posthoc;
  std::vector<std::string> errors;
};

struct StatsReport {
  double alpha = 0.05;
  std::string control_group;
  stats::LeveneCenter levene_center = stats::LeveneCenter::kMean;
  std::vector<FamilyResult> families;

  const FamilyResult* find(Dimension d, Metric m) const {
    for (const auto& f : families) {
      if (f.dim == d && f.metric == m) return &f;
    }
    return nullptr;
  }
};

inline std::vector<stats::GroupSample> family_samples(const std::vector<MetricRow>& rows,
                                                      Dimension dim, Metric metric) {
  std::map<std::string, std::vector<double>> by_group;
  for (const auto& r : rows) {
    if (r.dim != dim) continue;
    by_group[r.group];
    if (const auto v = metric_value(r.metrics, metric)) by_group[r.group].push_back(*v);
  }
  std::vector<stats::GroupSample> out;
  for (auto& [g, vs] : by_group) out.emplace_back(g, std::move(vs));
  return out;
}

inline FamilyResult analyze_family(const std::vector<MetricRow>& rows, Dimension dim,
                                   Metric metric, double alpha,
                                   stats::LeveneCenter center) {
  FamilyResult f;
  f.dim = dim;
  f.metric = metric;
  const auto samples = family_samples(rows, dim, metric);
  for (const auto& s : samples) f.groups.push_back({s.label(), s.n(), s.mean(), s.variance()});
  try {
    f.levene = stats::levene_test(samples, center);
  } catch (const DomainError& e) {
    f.errors.push_back(std::string("levene: ") + e.what());
  }
  try {
    f.welch = stats::welch_anova(samples);
    f.posthoc = stats::games_howell(samples, alpha);
  } catch (const DomainError& e) {
    f.errors.push_back(std::string("welch/games-howell: ") + e.what());
  }
  return f;
}

inline StatsReport analyze(const std::vector<MetricRow>& rows, const AnalysisConfig& config) {
  if (rows.empty()) throw Error("no per-speaker metrics to analyze");
  StatsReport report;
  report.alpha = config.alpha;
  report.control_group = config.control_group;
  report.levene_center = config.levene_center;
  report.families.resize(config.dimensions.size() * kAllMetrics.size());
  // Families are independent; the pairwise quadratures dominate the cost.
  parallel_for(report.families.size(), [&](std::size_t i) {
    const Dimension d = config.dimensions[i / kAllMetrics.size()];
    const Metric m = kAllMetrics[i % kAllMetrics.size()];
    report.families[i] = analyze_family(rows, d, m, config.alpha, config.levene_center);
  });
  return report;
}

inline nlohmann::json stats_report_to_json(const StatsReport& r) {
  nlohmann::json fams = nlohmann::json::array();
  for (const auto& f : r.families) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : f.groups) {
      groups.push_back({{"label", g.label}, {"n", g.n}, {"mean", g.mean}, {"variance", g.variance}});
    }
    nlohmann::json jf = {{"dimension", to_string(f.dim)},
                         {"metric", to_string(f.metric)},
                         {"groups", std::move(groups)},
                         {"errors", f.errors}};
    if (f.levene) {
      jf["levene"] = {{"df1", f.levene->df1},
                      {"df2", f.levene->df2},
                      {"F", f.levene->statistic},
                      {"p", f.levene->p_value}};
    } else {
      jf["levene"] = nullptr;
    }
    if (f.welch) {
      jf["welch"] = {{"df1", f.welch->df1},
                     {"df2", f.welch->df2},
                     {"F", f.welch->f_statistic},
                     {"p", f.welch->p_value},
                     {"est_omega_squared", f.welch->omega_squared}};
      jf["effect_size"] = to_string(stats::interpret_effect_size(f.welch->omega_squared));
    } else {
      jf["welch"] = nullptr;
      jf["effect_size"] = nullptr;
    }
    nlohmann::json ph = nlohmann::json::array();
    for (const auto& c : f.posthoc) {
      ph.push_back({{"group_a", c.group_a},
                    {"group_b", c.group_b},
                    {"mean_difference", c.mean_difference},
                    {"t", c.t_statistic},
                    {"df", c.df},
                    {"p_adjusted", c.p_adjusted},
                    {"significant", c.significant},
                    {"direction", to_string(c.direction)}});
    }
    jf["posthoc"] = std::move(ph);
    fams.push_back(std::move(jf));
  }
  return {{"alpha", r.alpha},
          {"control_group", r.control_group},
          {"levene_center", r.levene_center == stats::LeveneCenter::kMean ? "mean" : "median"},
          {"families", std::move(fams)}};
}

inline stats::Direction parse_direction(std::string_view s) {
  if (s == "higher") return stats::Direction::kHigher;
  if (s == "lower") return stats::Direction::kLower;
  if (s == "none") return stats::Direction::kNone;
  throw Error("unknown direction: " + std::string(s));
}

inline StatsReport stats_report_from_json(const nlohmann::json& j) {
  StatsReport r;
  r.alpha = j.at("alpha").get<double>();
  r.control_group = j.at("control_group").get<std::string>();
  r.levene_center = j.at("levene_center").get<std::string>() == "median"
                        ? stats::LeveneCenter::kMedian
                        : stats::LeveneCenter::kMean;
  for (const auto& jf : j.at("families")) {
    FamilyResult f;
    f.dim = parse_dimension(jf.at("dimension").get<std::string>());
    f.metric = parse_metric(jf.at("metric").get<std::string>());
    for (const auto& g : jf.at("groups")) {
      f.groups.push_back({g.at("label").get<std::string>(), g.at("n").get<std::size_t>(),
                          g.at("mean").get<double>(), g.at("variance").get<double>()});
    }
    f.errors = jf.at("errors").get<std::vector<std::string>>();
    if (!jf.at("levene").is_null()) {
      const auto& l = jf["levene"];
      f.levene = stats::LeveneResult{l.at("df1").get<double>(), l.at("df2").get<double>(),
                                     l.at("F").get<double>(), l.at("p").get<double>()};
    }
    if (!jf.at("welch").is_null()) {
      const auto& w = jf["welch"];
      f.welch = stats::WelchResult{w.at("df1").get<double>(), w.at("df2").get<double>(),
                                   w.at("F").get<double>(), w.at("p").get<double>(),
                                   w.at("est_omega_squared").get<double>()};
    }
    for (const auto& c : jf.at("posthoc")) {
      stats::PosthocComparison pc;
      pc.group_a = c.at("group_a").get<std::string>();
      pc.group_b = c.at("group_b").get<std::string>();
      pc.mean_difference = c.at("mean_difference").get<double>();
      pc.t_statistic = c.at("t").get<double>();
      pc.df = c.at("df").get<double>();
      pc.p_adjusted = c.at("p_adjusted").get<double>();
      pc.significant = c.at("significant").get<bool>();
      pc.direction = parse_direction(c.at("direction").get<std::string>());
      f.posthoc.push_back(std::move(pc));
    }
    r.families.push_back(std::move(f));
  }
  return r;
}

// Tables of the omnibus tests, one row per (dimension, metric).
inline void write_levene_csv(std::ostream& os, const StatsReport& r) {
  csv::write_row(os, {"emotion", "ued_metric", "df1", "df2", "F", "p"});
  for (const auto& f : r.families) {
    if (!f.levene) continue;
    csv::write_row(os, {std::string(to_string(f.dim)), std::string(display_name(f.metric)),
                        csv::format_double(f.levene->df1), csv::format_double(f.levene->df2),
                        csv::format_double(f.levene->statistic),
                        csv::format_double(f.levene->p_value)});
  }
}

inline void write_welch_csv(std::ostream& os, const StatsReport& r) {
  csv::write_row(os, {"emotion", "ued_metric", "df1", "df2", "F", "p", "est_omega_squared"});
  for (const auto& f : r.families) {
    if (!f.welch) continue;
    csv::write_row(os, {std::string(to_string(f.dim)), std::string(display_name(f.metric)),
                        csv::format_double(f.welch->df1), csv::format_double(f.welch->df2),
                        csv::format_double(f.welch->f_statistic),
                        csv::format_double(f.welch->p_value),
                        csv::format_double(f.welch->omega_squared)});
  }
}

inline void write_posthoc_csv(std::ostream& os, const StatsReport& r) {
  csv::write_row(os, {"emotion", "ued_metric", "group_a", "group_b", "mean_difference", "t",
                      "df", "p_adjusted", "significant"});
  for (const auto& f : r.families) {
    for (const auto& c : f.posthoc) {
      csv::write_row(os, {std::string(to_string(f.dim)), std::string(display_name(f.metric)),
                          c.group_a, c.group_b, csv::format_double(c.mean_difference),
                          csv::format_double(c.t_statistic), csv::format_double(c.df),
                          csv::format_double(c.p_adjusted), c.significant ? "true" : "false"});
    }
  }
}

// ---------------------------------------------------------------------------
// Direction summary

struct DirectionCell {
  std::string group;
  Metric metric = Metric::kAverage;
  Dimension dim = Dimension::kValence;
  // Absent when the family's tests could not run.
  std::optional<stats::Direction> direction;
  double mean_difference = 0.0;  // group - control
  double p_adjusted = 1.0;
};

struct DirectionSummary {
  std::string control_group;
  std::vector<std::string> groups;  // every non-control group, sorted
  std::vector<Dimension> dims;
  std::vector<DirectionCell> cells;  // group-major, then metric, then dim

  const DirectionCell* find(std::string_view group, Metric m, Dimension d) const {
    for (const auto& c : cells) {
      if (c.group == group && c.metric == m && c.dim == d) return &c;
    }
    return nullptr;
  }
};

// Direction of each group relative to the control per family: the sign of
// (group mean - control mean) when p_adjusted < alpha, otherwise none.
// Throws if a family that ran lacks the group-vs-control comparison.
inline DirectionSummary emit_direction_summary(const StatsReport& report, double alpha) {
  DirectionSummary s;
  s.control_group = report.control_group;
  std::vector<Dimension> dims;
  for (const auto& f : report.families) {
    if (std::find(dims.begin(), dims.end(), f.dim) == dims.end()) dims.push_back(f.dim);
    for (const auto& g : f.groups) {
      if (g.label != report.control_group &&
          std::find(s.groups.begin(), s.groups.end(), g.label) == s.groups.end()) {
        s.groups.push_back(g.label);
      }
    }
  }
  std::sort(s.groups.begin(), s.groups.end());
  s.dims = dims;
  bool control_seen = false;
  for (const auto& f : report.families) {
    for (const auto& g : f.groups) control_seen |= g.label == report.control_group;
  }
  if (!control_seen) {
    throw Error("control group '" + report.control_group + "' not present in the data");
  }

  for (const auto& g : s.groups) {
    for (Metric m : kAllMetrics) {
      for (Dimension d : dims) {
        const FamilyResult* f = report.find(d, m);
        if (!f) continue;
        DirectionCell cell;
        cell.group = g;
        cell.metric = m;
        cell.dim = d;
        if (f->welch) {
          const stats::PosthocComparison* pair = nullptr;
          std::optional<stats::PosthocComparison> flipped;
          for (const auto& c : f->posthoc) {
            if (c.group_a == g && c.group_b == report.control_group) pair = &c;
            if (c.group_b == g && c.group_a == report.control_group) {
              flipped = c.swapped();
              pair = &*flipped;
            }
            if (pair) break;
          }
          if (!pair) {
            throw Error("no " + g + " vs " + report.control_group + " comparison for " +
                        std::string(to_string(d)) + " " + std::string(to_string(m)));
          }
          cell.mean_difference = pair->mean_difference;
          cell.p_adjusted = pair->p_adjusted;
          if (pair->p_adjusted < alpha && pair->mean_difference != 0.0) {
            cell.direction = pair->mean_difference > 0.0 ? stats::Direction::kHigher
                                                         : stats::Direction::kLower;
          } else {
            cell.direction = stats::Direction::kNone;
          }
        }
        s.cells.push_back(std::move(cell));
      }
    }
  }
  return s;
}

inline std::string_view direction_label(const std::optional<stats::Direction>& d) {
  if (!d) return "unavailable";
  switch (*d) {
    case stats::Direction::kHigher: return "significantly higher";
    case stats::Direction::kLower: return "significantly lower";
    case stats::Direction::kNone: break;
  }
  return "no difference";
}

inline std::string_view direction_glyph(const std::optional<stats::Direction>& d) {
  if (!d) return "?";
  switch (*d) {
    case stats::Direction::kHigher: return "↑";
    case stats::Direction::kLower: return "↓";
    case stats::Direction::kNone: break;
  }
  return "–";
}

inline void write_direction_csv(std::ostream& os, const DirectionSummary& s) {
  csv::write_row(os, {"group", "control", "ued_metric", "emotion", "direction",
                      "mean_difference", "p_adjusted"});
  for (const auto& c : s.cells) {
    csv::write_row(os, {c.group, s.control_group, std::string(to_string(c.metric)),
                        std::string(to_string(c.dim)), std::string(direction_label(c.direction)),
                        c.direction ? csv::format_double(c.mean_difference) : "",
                        c.direction ? csv::format_double(c.p_adjusted) : ""});
  }
}

// Plain-text grid: one row per group, one column per metric x dimension.
inline void write_direction_text(std::ostream& os, const DirectionSummary& s) {
  std::size_t width = 5;
  for (const auto& g : s.groups) width = std::max(width, g.size() + 2);
  auto pad = [](std::string_view v, std::size_t w) {
    std::string out(v);
    // Glyphs are three UTF-8 bytes but one column wide.
    std::size_t cols = 0;
    for (unsigned char ch : out) cols += (ch & 0xC0) != 0x80;
    if (cols < w) out.append(w - cols, ' ');
    return out;
  };
  os << "Differences vs. " << s.control_group
     << " (↑ significantly higher, ↓ significantly lower, – no difference)\n";
  // Each metric spans one column per dimension, wide enough for its name.
  const std::size_t nd = std::max<std::size_t>(s.dims.size(), 1);
  auto col = [&](Metric m, std::size_t i) {
    const std::size_t span = std::max(display_name(m).size() + 2, 4 * nd);
    return span / nd + (i + 1 == nd ? span % nd : 0);
  };
  os << pad("", width);
  for (Metric m : kAllMetrics) {
    std::size_t span = 0;
    for (std::size_t i = 0; i < nd; ++i) span += col(m, i);
    os << pad(display_name(m), span);
  }
  os << '\n' << pad("", width);
  for (Metric m : kAllMetrics) {
    for (std::size_t i = 0; i < s.dims.size(); ++i) {
      const char c = static_cast<char>(std::toupper(to_string(s.dims[i])[0]));
      os << pad(std::string(1, c), col(m, i));
    }
  }
  os << '\n';
  for (const auto& g : s.groups) {
    os << pad(g, width);
    for (Metric m : kAllMetrics) {
      for (std::size_t i = 0; i < s.dims.size(); ++i) {
        const auto* c = s.find(g, m, s.dims[i]);
        os << pad(c ? direction_glyph(c->direction) : "?", col(m, i));
      }
    }
    os << '\n';
  }
}

// Group-minus-control mean differences where significant, "--" otherwise.
inline void write_mean_differences_csv(std::ostream& os, const DirectionSummary& s) {
  std::vector<std::string> header = {"pair"};
  for (Metric m : kAllMetrics) {
    for (Dimension d : s.dims) {
      header.push_back(std::string(to_string(m)) + "_" + std::string(to_string(d)));
    }
  }
  csv::write_row(os, header);
  for (const auto& g : s.groups) {
    std::vector<std::string> row = {g + "--" + s.control_group};
    for (Metric m : kAllMetrics) {
      for (Dimension d : s.dims) {
        const auto* c = s.find(g, m, d);
        if (c && c->direction && *c->direction != stats::Direction::kNone) {
          row.push_back(csv::format_double(c->mean_difference));
        } else {
          row.push_back("--");
        }
      }
    }
    csv::write_row(os, row);
  }
}

// ---------------------------------------------------------------------------
// Popularity stratification

struct PopularityBin {
  double low = 0.0;
  double high = 0.0;
  std::size_t n_users = 0;
  std::optional<double> mean;
  bool suppressed = false;
  std::string reason;
};

struct PopularityCurve {
  std::string group;
  Metric metric = Metric::kAverage;
  Dimension dim = Dimension::kValence;
  std::vector<PopularityBin> bins;
  std::size_t overflow_count = 0;  // avg likes >= bin_max
  std::optional<double> overflow_mean;
  std::size_t n_speakers = 0;      // speakers with this metric present
};

// Bins speakers by average likes per post into [b, b + width) up to
// bin_max; bins with fewer than min_users_per_bin speakers are suppressed
// (count kept, mean withheld).
inline std::vector<PopularityCurve> stratify_by_popularity(const std::vector<MetricRow>& rows,
                                                           const AnalysisConfig& config) {
  const auto n_bins =
      static_cast<std::size_t>(std::ceil(config.bin_max / config.bin_width - 1e-12));
  std::map<std::string, std::size_t> groups;
  std::vector<Dimension> dims;
  for (const auto& r : rows) {
    groups[r.group];
    if (std::find(dims.begin(), dims.end(), r.dim) == dims.end()) dims.push_back(r.dim);
  }
  std::sort(dims.begin(), dims.end());
  std::vector<PopularityCurve> curves;
  for (const auto& [g, unused] : groups) {
    for (Metric m : kAllMetrics) {
      for (Dimension d : dims) {
        PopularityCurve c;
        c.group = g;
        c.metric = m;
        c.dim = d;
        std::vector<double> sums(n_bins, 0.0);
        double overflow_sum = 0.0;
        c.bins.resize(n_bins);
        for (std::size_t b = 0; b < n_bins; ++b) {
          c.bins[b].low = static_cast<double>(b) * config.bin_width;
          c.bins[b].high = std::min(c.bins[b].low + config.bin_width, config.bin_max);
        }
        for (const auto& r : rows) {
          if (r.group != g || r.dim != d) continue;
          const auto v = metric_value(r.metrics, m);
          if (!v) continue;
          ++c.n_speakers;
          if (r.avg_likes >= config.bin_max) {
            ++c.overflow_count;
            overflow_sum += *v;
            continue;
          }
          auto b = static_cast<std::size_t>(std::floor(r.avg_likes / config.bin_width));
          // Guard against rounding placing a value just under a bin's lower edge.
          while (b > 0 && r.avg_likes < c.bins[b].low) --b;
          while (b + 1 < n_bins && r.avg_likes >= c.bins[b].high) ++b;
          c.bins[b].n_users += 1;
          sums[b] += *v;
        }
        for (std::size_t b = 0; b < n_bins; ++b) {
          auto& bin = c.bins[b];
          if (bin.n_users < config.min_users_per_bin) {
            bin.suppressed = true;
            bin.reason = "fewer than " + std::to_string(config.min_users_per_bin) + " users";
          } else {
            bin.mean = sums[b] / static_cast<double>(bin.n_users);
          }
        }
        if (c.overflow_count > 0) {
          c.overflow_mean = overflow_sum / static_cast<double>(c.overflow_count);
        }
        curves.push_back(std::move(c));
      }
    }
  }
  return curves;
}

inline void write_popularity_csv(std::ostream& os, const std::vector<PopularityCurve>& curves) {
  csv::write_row(os, {"group", "ued_metric", "emotion", "bin_low", "bin_high", "n_users", "mean",
                      "status", "reason"});
  for (const auto& c : curves) {
    const std::string g = c.group;
    const std::string m(to_string(c.metric));
    const std::string d(to_string(c.dim));
    for (const auto& b : c.bins) {
      csv::write_row(os, {g, m, d, csv::format_double(b.low), csv::format_double(b.high),
                          std::to_string(b.n_users), csv::format_optional(b.mean),
                          b.suppressed ? "suppressed" : "plotted", b.reason});
    }
    if (c.overflow_count > 0) {
      csv::write_row(os, {g, m, d, csv::format_double(c.bins.empty() ? 0.0 : c.bins.back().high),
                          "inf", std::to_string(c.overflow_count),
                          csv::format_optional(c.overflow_mean), "overflow",
                          "average likes at or above the last bin edge"});
    }
  }
}

}  // namespace ued

#endif  // UED_REPORT_HPP_
