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


// ued: command-line front end for the pipeline stages.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ued/config.hpp"
#include "ued/pipeline.hpp"

namespace {

// Options shared by every subcommand. Values given on the command line
// override the config file.
struct Overrides {
  std::string config;
  std::vector<std::string> input;
  std::optional<std::string> out;
  std::optional<std::string> lexicon;
  std::optional<std::string> stopwords;
  std::optional<std::int64_t> min_posts;
  std::optional<std::int64_t> max_followers;
  std::optional<std::size_t> window_size;
  std::optional<std::size_t> step;
  std::optional<double> alpha;
  std::optional<std::string> dimensions;
  std::optional<std::string> control_group;
  std::optional<double> bin_width;
  std::optional<double> bin_max;
  std::optional<std::size_t> min_users_per_bin;
  std::optional<std::string> levene_center;
  bool dump_arcs = false;
  bool no_iqr = false;
};

void add_options(CLI::App* app, Overrides& o) {
  app->add_option("-c,--config", o.config, "Config file (key = value lines)");
  app->add_option("-i,--input", o.input, "Input JSONL file(s)");
  app->add_option("-o,--out", o.out, "Output directory");
  app->add_option("-l,--lexicon", o.lexicon, "VAD lexicon (word<TAB>v<TAB>a<TAB>d)");
  app->add_option("--stopwords", o.stopwords, "Stopword list, one word per line");
  app->add_option("--min-posts", o.min_posts, "Minimum posts per user");
  app->add_option("--max-followers", o.max_followers, "Maximum follower count");
  app->add_option("--window-size", o.window_size, "Rolling window size in tokens");
  app->add_option("--step", o.step, "Rolling window step");
  app->add_option("--alpha", o.alpha, "Significance level");
  app->add_option("--dimensions", o.dimensions, "Comma-separated subset of valence,arousal,dominance");
  app->add_option("--control-group", o.control_group, "Label of the control group");
  app->add_option("--bin-width", o.bin_width, "Popularity bin width (likes per post)");
  app->add_option("--bin-max", o.bin_max, "Upper edge of the last popularity bin");
  app->add_option("--min-users-per-bin", o.min_users_per_bin, "Smallest bin that is reported");
  app->add_option("--levene-center", o.levene_center, "mean or median");
  app->add_flag("--dump-arcs", o.dump_arcs, "Write per-speaker arcs under arcs/");
  app->add_flag("--no-iqr", o.no_iqr, "Skip the per-group IQR post-count filter");
}

ued::AnalysisConfig resolve(const Overrides& o) {
  ued::AnalysisConfig c = o.config.empty() ? ued::AnalysisConfig{} : ued::load_config(o.config);
  if (!o.input.empty()) c.input_paths = o.input;
  if (o.out) c.output_dir = *o.out;
  if (o.lexicon) c.lexicon_path = *o.lexicon;
  if (o.stopwords) c.stopwords_path = *o.stopwords;
  if (o.min_posts) c.min_posts = *o.min_posts;
  if (o.max_followers) c.max_followers = *o.max_followers;
  if (o.window_size) c.window_size = *o.window_size;
  if (o.step) c.step = *o.step;
  if (o.alpha) c.alpha = *o.alpha;
  if (o.dimensions) ued::apply_config_value(c, "dimensions", *o.dimensions, 0);
  if (o.control_group) c.control_group = *o.control_group;
  if (o.bin_width) c.bin_width = *o.bin_width;
  if (o.bin_max) c.bin_max = *o.bin_max;
  if (o.min_users_per_bin) c.min_users_per_bin = *o.min_users_per_bin;
  if (o.levene_center) ued::apply_config_value(c, "levene_center", *o.levene_center, 0);
  if (o.dump_arcs) c.dump_arcs = true;
  if (o.no_iqr) c.iqr_filter = false;
  c.validate();
  return c;
}

void print_filter_summary(const ued::FilterReport& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  for (std::size_t i = 0; i < r.rules_run; ++i) {
    const auto rule = static_cast<ued::FilterRule>(i);
    std::cerr << "  " << ued::to_string(rule) << ": -" << r.users_removed(rule) << " users, -"
              << r.posts_removed(rule) << " posts\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Utterance emotion dynamics over social media timelines"};
  app.require_subcommand(1);

  Overrides o;
  auto* pre = app.add_subcommand("preprocess", "Ingest, filter and clean; write timelines");
  auto* met = app.add_subcommand("metrics", "Score timelines and compute per-speaker metrics");
  auto* ana = app.add_subcommand("analyze", "Levene, Welch and Games-Howell per family");
  auto* rep = app.add_subcommand("report", "Direction summary, mean differences, popularity");
  auto* run = app.add_subcommand("run", "All stages in one go");
  for (auto* s : {pre, met, ana, rep, run}) add_options(s, o);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto c = resolve(o);
    if (pre->parsed()) {
      const auto p = ued::stage_preprocess(c);
      std::cerr << p.timelines.size() << " timelines written to " << c.output_dir << '\n';
      print_filter_summary(p.report);
    } else if (met->parsed()) {
      const auto m = ued::stage_metrics(c);
      std::cerr << m.speakers.size() << " speakers scored, " << m.exclusions.size()
                << " excluded\n";
    } else if (ana->parsed()) {
      const auto s = ued::stage_analyze(c);
      for (const auto& f : s.families) {
        for (const auto& e : f.errors) {
          std::cerr << "warning: " << ued::to_string(f.dim) << " " << ued::to_string(f.metric)
                    << ": " << e << '\n';
        }
      }
    } else if (rep->parsed()) {
      ued::write_direction_text(std::cout, ued::stage_report(c));
    } else if (run->parsed()) {
      const auto r = ued::stage_run(c);
      print_filter_summary(r.preprocessed.report);
      std::cerr << r.metrics.speakers.size() << " speakers, " << r.metrics.exclusions.size()
                << " excluded\n";
      ued::write_direction_text(std::cout, r.directions);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
