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

#ifndef UED_PIPELINE_HPP_
#define UED_PIPELINE_HPP_

// End-to-end stages over files in an output directory:
//
//   preprocess  inputs -> timelines.jsonl, filter_report.json
//   metrics     timelines.jsonl + lexicon -> metrics.csv, exclusions.csv [, arcs/]
//   analyze     metrics.csv -> stats_report.json, levene.csv, welch.csv, posthoc.csv
//   report      stats_report.json + metrics.csv -> direction_summary.{txt,csv},
//               mean_differences.csv, popularity.csv
//
// Each stage writes to temporary files and renames them into place only once
// everything succeeded, so a failed stage leaves no partial output behind.

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ued/config.hpp"
#include "ued/corpus.hpp"
#include "ued/dynamics.hpp"
#include "ued/error.hpp"
#include "ued/lexicon.hpp"
#include "ued/report.hpp"
#include "ued/stopwords.hpp"
#include "ued/timeline.hpp"

namespace ued {

inline FilterConfig filter_config(const AnalysisConfig& c) {
  return {c.min_posts, c.max_followers, c.iqr_filter, c.iqr_exempt_groups};
}

inline CleanConfig clean_config(const AnalysisConfig& c) {
  CleanConfig out;
  if (c.stopwords_path) out.stopwords = load_stopwords(*c.stopwords_path);
  return out;
}

inline UedConfig ued_config(const AnalysisConfig& c) {
  return {c.window_size, c.step, c.dump_arcs};
}

// Everything the pipeline produces, kept in memory.
struct PipelineResult {
  PreprocessResult preprocessed;
  MetricsResult metrics;
  std::vector<MetricRow> rows;
  StatsReport stats;
  DirectionSummary directions;
  std::vector<PopularityCurve> popularity;
};

inline void require_speakers(const std::vector<SpeakerTimeline>& timelines) {
  if (timelines.empty()) throw Error("no speakers left after preprocessing");
}

inline PipelineResult run_pipeline(std::vector<UserRecord> users, const Lexicon& lexicon,
                                   const AnalysisConfig& config, const CleanConfig& clean) {
  config.validate();
  PipelineResult r;
  r.preprocessed = preprocess(std::move(users), filter_config(config), clean);
  require_speakers(r.preprocessed.timelines);
  r.metrics = compute_metrics(r.preprocessed.timelines, lexicon, ued_config(config));
  r.rows = metric_rows(r.metrics.speakers, config.dimensions);
  r.stats = analyze(r.rows, config);
  r.directions = emit_direction_summary(r.stats, config.alpha);
  r.popularity = stratify_by_popularity(r.rows, config);
  return r;
}

inline PipelineResult run_pipeline(std::vector<UserRecord> users, const Lexicon& lexicon,
                                   const AnalysisConfig& config) {
  return run_pipeline(std::move(users), lexicon, config, CleanConfig{});
}

// ---------------------------------------------------------------------------
// Output transaction

class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& [tmp, final_path] : files_) std::filesystem::remove(tmp, ec);
  }

  // Writes `name` (relative to the directory) via `fill` into a temp file.
  void write(const std::string& name, const std::function<void(std::ostream&)>& fill) {
    const auto final_path = dir_ / name;
    std::filesystem::create_directories(final_path.parent_path());
    auto tmp = final_path;
    tmp += ".tmp" + std::to_string(files_.size());
    files_.emplace_back(tmp, final_path);
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw Error("cannot write " + tmp.string());
    fill(os);
    os.flush();
    if (!os) throw Error("write failed: " + tmp.string());
  }

  void commit() {
    for (const auto& [tmp, final_path] : files_) std::filesystem::rename(tmp, final_path);
    committed_ = true;
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> files_;
  bool committed_ = false;
};

namespace detail {

inline void write_json(std::ostream& os, const nlohmann::json& j) { os << j.dump(2) << '\n'; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json read_json(const std::filesystem::path& p) {
  try {
    return nlohmann::json::parse(read_file(p));
  } catch (const nlohmann::json::exception& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

}  // namespace detail

inline void write_timelines(std::ostream& os, const std::vector<SpeakerTimeline>& ts) {
  for (const auto& t : ts) os << timeline_to_json(t).dump() << '\n';
}

inline std::vector<SpeakerTimeline> read_timelines(std::istream& in) {
  std::vector<SpeakerTimeline> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(timeline_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return out;
}

inline void write_exclusions_csv(std::ostream& os, const std::vector<Exclusion>& ex) {
  csv::write_row(os, {"user_id", "group", "reason", "detail"});
  for (const auto& e : ex) {
    csv::write_row(os, {e.user_id, e.group, std::string(to_string(e.reason)), e.detail});
  }
}

// One file per dimension: user_id, group, index, value.
inline void write_arcs_csv(std::ostream& os, const std::vector<SpeakerUed>& speakers,
                           Dimension d) {
  csv::write_row(os, {"user_id", "group", "index", "value"});
  for (const auto& s : speakers) {
    const auto& arc = s.arcs[static_cast<std::size_t>(d)];
    for (std::size_t i = 0; i < arc.values.size(); ++i) {
      csv::write_row(os, {s.user_id, s.group, std::to_string(i),
                          csv::format_double(arc.values[i])});
    }
  }
}

inline void emit_preprocess(OutputSet& out, const PreprocessResult& p) {
  out.write("timelines.jsonl", [&](std::ostream& os) { write_timelines(os, p.timelines); });
  out.write("filter_report.json",
            [&](std::ostream& os) { detail::write_json(os, filter_report_to_json(p.report)); });
}

inline void emit_metrics(OutputSet& out, const MetricsResult& m, const std::vector<MetricRow>& rows,
                         const AnalysisConfig& c) {
  out.write("metrics.csv", [&](std::ostream& os) { write_metrics_csv(os, rows); });
  out.write("exclusions.csv", [&](std::ostream& os) { write_exclusions_csv(os, m.exclusions); });
  if (c.dump_arcs) {
    for (Dimension d : c.dimensions) {
      out.write("arcs/" + std::string(to_string(d)) + ".csv",
                [&](std::ostream& os) { write_arcs_csv(os, m.speakers, d); });
    }
  }
}

inline void emit_analysis(OutputSet& out, const StatsReport& s) {
  out.write("stats_report.json",
            [&](std::ostream& os) { detail::write_json(os, stats_report_to_json(s)); });
  out.write("levene.csv", [&](std::ostream& os) { write_levene_csv(os, s); });
  out.write("welch.csv", [&](std::ostream& os) { write_welch_csv(os, s); });
  out.write("posthoc.csv", [&](std::ostream& os) { write_posthoc_csv(os, s); });
}

inline void emit_report(OutputSet& out, const DirectionSummary& d,
                        const std::vector<PopularityCurve>& pop) {
  out.write("direction_summary.txt", [&](std::ostream& os) { write_direction_text(os, d); });
  out.write("direction_summary.csv", [&](std::ostream& os) { write_direction_csv(os, d); });
  out.write("mean_differences.csv", [&](std::ostream& os) { write_mean_differences_csv(os, d); });
  out.write("popularity.csv", [&](std::ostream& os) { write_popularity_csv(os, pop); });
}

// ---------------------------------------------------------------------------
// File-based stages

inline std::vector<UserRecord> ingest_inputs(const AnalysisConfig& c,
                                             std::vector<std::string>* warnings = nullptr) {
  if (c.input_paths.empty()) throw Error("no input files given");
  std::vector<IngestResult> parts;
  for (const auto& p : c.input_paths) parts.push_back(ingest(p));
  auto merged = merge_ingests(std::move(parts));
  if (warnings) {
    for (const auto& m : merged.malformed_examples) warnings->push_back("malformed line " + m);
  }
  if (merged.users.empty()) throw Error("no valid records in the input");
  return std::move(merged.users);
}

inline Lexicon load_configured_lexicon(const AnalysisConfig& c) {
  if (c.lexicon_path.empty()) throw Error("no lexicon given");
  return load_lexicon(c.lexicon_path);
}

inline PreprocessResult stage_preprocess(const AnalysisConfig& c) {
  c.validate();
  auto users = ingest_inputs(c);
  auto p = preprocess(std::move(users), filter_config(c), clean_config(c));
  require_speakers(p.timelines);
  OutputSet out(c.output_dir);
  emit_preprocess(out, p);
  out.commit();
  return p;
}

inline MetricsResult stage_metrics(const AnalysisConfig& c) {
  c.validate();
  const auto lexicon = load_configured_lexicon(c);
  std::ifstream in(std::filesystem::path(c.output_dir) / "timelines.jsonl");
  if (!in) throw Error("no timelines.jsonl in " + c.output_dir + "; run preprocess first");
  const auto timelines = read_timelines(in);
  require_speakers(timelines);
  auto m = compute_metrics(timelines, lexicon, ued_config(c));
  OutputSet out(c.output_dir);
  emit_metrics(out, m, metric_rows(m.speakers, c.dimensions), c);
  out.commit();
  return m;
}

inline std::vector<MetricRow> read_metrics_file(const AnalysisConfig& c) {
  const auto p = std::filesystem::path(c.output_dir) / "metrics.csv";
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("no metrics.csv in " + c.output_dir + "; run metrics first");
  try {
    return read_metrics_csv(in);
  } catch (const ParseError& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

inline StatsReport stage_analyze(const AnalysisConfig& c) {
  c.validate();
  const auto s = analyze(read_metrics_file(c), c);
  OutputSet out(c.output_dir);
  emit_analysis(out, s);
  out.commit();
  return s;
}

inline DirectionSummary stage_report(const AnalysisConfig& c) {
  c.validate();
  const auto stats =
      stats_report_from_json(detail::read_json(std::filesystem::path(c.output_dir) /
                                               "stats_report.json"));
  const auto d = emit_direction_summary(stats, c.alpha);
  const auto pop = stratify_by_popularity(read_metrics_file(c), c);
  OutputSet out(c.output_dir);
  emit_report(out, d, pop);
  out.commit();
  return d;
}

// All four stages in memory; outputs appear only if every stage succeeded.
inline PipelineResult stage_run(const AnalysisConfig& c) {
  c.validate();
  const auto lexicon = load_configured_lexicon(c);
  auto r = run_pipeline(ingest_inputs(c), lexicon, c, clean_config(c));
  OutputSet out(c.output_dir);
  emit_preprocess(out, r.preprocessed);
  emit_metrics(out, r.metrics, r.rows, c);
  emit_analysis(out, r.stats);
  emit_report(out, r.directions, r.popularity);
  out.commit();
  return r;
}

}  // namespace ued

#endif  // UED_PIPELINE_HPP_
