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

#ifndef UED_CONFIG_HPP_
#define UED_CONFIG_HPP_

// Run configuration. The file format is one `key = value` pair per line;
// '#' starts a comment, list values are comma-separated.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "ued/error.hpp"
#include "ued/stats/anova.hpp"
#include "ued/text.hpp"
#include "ued/timeline.hpp"

namespace ued {

struct AnalysisConfig {
  std::string lexicon_path;
  std::vector<std::string> input_paths;
  std::string output_dir = "ued_out";
  std::optional<std::string> stopwords_path;

  // preprocessing
  std::int64_t min_posts = 50;
  std::int64_t max_followers = 5000;
  bool iqr_filter = true;
  std::set<std::string> iqr_exempt_groups;

  // arcs
  std::size_t window_size = 100;
  std::size_t step = 1;
  bool dump_arcs = false;

  // statistics
  double alpha = 0.05;
  std::vector<Dimension> dimensions{kAllDimensions.begin(), kAllDimensions.end()};
  std::string control_group = "control";
  stats::LeveneCenter levene_center = stats::LeveneCenter::kMean;

  // popularity bins [b, b + width) up to bin_max
  double bin_width = 2.0;
  double bin_max = 8.0;
  std::size_t min_users_per_bin = 10;

  // Throws Error describing the first violated constraint.
  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
    if (!(bin_width > 0.0)) throw Error("bin_width must be positive");
    if (!(bin_max > 0.0)) throw Error("bin_max must be positive");
    if (window_size == 0) throw Error("window_size must be positive");
    if (step == 0) throw Error("step must be positive");
    if (dimensions.empty()) throw Error("no dimensions selected");
    if (min_posts < 0) throw Error("min_posts must be non-negative");
    if (max_followers < 0) throw Error("max_followers must be non-negative");
  }
};

namespace detail {

inline std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const std::size_t comma = v.find(',', start);
    const auto piece = text::trim(v.substr(start, comma == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : comma - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline bool parse_bool(std::string_view v, std::size_t line) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ParseError("expected a boolean, got '" + std::string(v) + "'", line);
}

template <typename T>
T parse_number(std::string_view v, std::size_t line) {
  try {
    std::size_t used = 0;
    const std::string s(v);
    T out{};
    if constexpr (std::is_floating_point_v<T>) {
      out = static_cast<T>(std::stod(s, &used));
    } else if constexpr (std::is_signed_v<T>) {
      out = static_cast<T>(std::stoll(s, &used));
    } else {
      if (!s.empty() && s.front() == '-') throw std::invalid_argument("negative");
      out = static_cast<T>(std::stoull(s, &used));
    }
    if (used != s.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + std::string(v) + "'", line);
  }
}

}  // namespace detail

// Sets one key. `line` is used for error messages (0 for command-line
// overrides).
inline void apply_config_value(AnalysisConfig& c, std::string_view key,
                               std::string_view value, std::size_t line = 0) {
  using detail::parse_number;
  if (key == "lexicon") {
    c.lexicon_path = value;
  } else if (key == "input") {
    c.input_paths = detail::split_list(value);
  } else if (key == "out" || key == "output_dir") {
    c.output_dir = value;
  } else if (key == "stopwords") {
    if (value.empty()) c.stopwords_path.reset();
    else c.stopwords_path = std::string(value);
  } else if (key == "min_posts") {
    c.min_posts = parse_number<std::int64_t>(value, line);
  } else if (key == "max_followers") {
    c.max_followers = parse_number<std::int64_t>(value, line);
  } else if (key == "iqr_filter") {
    c.iqr_filter = detail::parse_bool(value, line);
  } else if (key == "iqr_exempt_groups") {
    const auto groups = detail::split_list(value);
    c.iqr_exempt_groups = {groups.begin(), groups.end()};
  } else if (key == "window_size") {
    c.window_size = parse_number<std::size_t>(value, line);
  } else if (key == "step") {
    c.step = parse_number<std::size_t>(value, line);
  } else if (key == "dump_arcs") {
    c.dump_arcs = detail::parse_bool(value, line);
  } else if (key == "alpha") {
    c.alpha = parse_number<double>(value, line);
  } else if (key == "dimensions") {
    c.dimensions.clear();
    for (const auto& d : detail::split_list(value)) c.dimensions.push_back(parse_dimension(d));
  } else if (key == "control_group") {
    c.control_group = value;
  } else if (key == "levene_center") {
    if (value == "mean") c.levene_center = stats::LeveneCenter::kMean;
    else if (value == "median") c.levene_center = stats::LeveneCenter::kMedian;
    else throw ParseError("levene_center must be 'mean' or 'median'", line);
  } else if (key == "bin_width") {
    c.bin_width = parse_number<double>(value, line);
  } else if (key == "bin_max") {
    c.bin_max = parse_number<double>(value, line);
  } else if (key == "min_users_per_bin") {
    c.min_users_per_bin = parse_number<std::size_t>(value, line);
  } else {
    throw ParseError("unknown configuration key '" + std::string(key) + "'", line);
  }
}

inline void read_config(std::istream& in, AnalysisConfig& c) {
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", lineno);
    const auto key = text::trim(line.substr(0, eq));
    const auto value = text::trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", lineno);
    apply_config_value(c, key, value, lineno);
  }
}

// Relative paths in the file are resolved against the file's directory.
inline AnalysisConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  AnalysisConfig c;
  const std::string default_out = c.output_dir;
  c.output_dir.clear();
  try {
    read_config(in, c);
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
  const auto base = std::filesystem::path(path).parent_path();
  auto resolve = [&](std::string& p) {
    if (p.empty() || std::filesystem::path(p).is_absolute()) return;
    p = (base / p).lexically_normal().string();
  };
  if (!c.lexicon_path.empty()) resolve(c.lexicon_path);
  for (auto& p : c.input_paths) resolve(p);
  if (c.stopwords_path) resolve(*c.stopwords_path);
  if (c.output_dir.empty()) c.output_dir = default_out;
  else resolve(c.output_dir);
  return c;
}

}  // namespace ued

#endif  // UED_CONFIG_HPP_
