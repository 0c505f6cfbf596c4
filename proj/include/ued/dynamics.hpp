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

#ifndef UED_DYNAMICS_HPP_
#define UED_DYNAMICS_HPP_

// Utterance emotion dynamics metrics per speaker and dimension: average
// emotion, emotional variability, rise rate and recovery rate.
//
// Excursions are found on deviations from the home base mean so that the
// segmentation and every distance are unchanged by a constant shift of the
// scores. Rates are in arc steps.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ued/arc.hpp"
#include "ued/error.hpp"
#include "ued/lexicon.hpp"
#include "ued/timeline.hpp"

namespace ued {

enum class Side { kAbove, kBelow };

// One excursion outside the home base. exit_index is the first outside
// index, return_index the first index back inside (absent if the arc ends
// displaced).
struct Displacement {
  std::size_t exit_index = 0;
  std::size_t peak_index = 0;
  std::optional<std::size_t> return_index;
  Side direction = Side::kAbove;
  double peak_value = 0.0;
  double boundary_value = 0.0;  // the home base edge that was crossed
  double peak_distance = 0.0;   // |peak_value - boundary_value|

  bool closed() const { return return_index.has_value(); }
  bool single_index() const {
    return closed() && *return_index == exit_index + 1;
  }
};

struct UedMetrics {
  double average = 0.0;
  double variability = 0.0;
  std::optional<double> rise_rate;
  std::optional<double> recovery_rate;
  std::size_t n_displacements = 0;
};

struct UedConfig {
  std::size_t window_size = 100;
  std::size_t step = 1;
  bool keep_arcs = false;
};

inline double average_emotion(std::span<const double> arc) {
  if (arc.empty()) throw DomainError("average_emotion of an empty arc");
  double sum = 0.0;
  for (double v : arc) sum += v;
  return sum / static_cast<double>(arc.size());
}

// Population standard deviation of the arc values.
inline double emotion_variability(std::span<const double> arc) {
  return home_base(arc).sd;
}

// Splits the arc into maximal runs outside [low, high]. A run that jumps
// straight across the band to the other side ends there (return_index is
// the crossing index) and a new run on the other side starts at the same
// index.
inline std::vector<Displacement> segment_displacements(std::span<const double> arc,
                                                       const HomeBase& hb) {
  std::vector<Displacement> out;
  std::optional<Displacement> open;
  double open_extreme = 0.0;  // |deviation| of the current peak
  for (std::size_t i = 0; i < arc.size(); ++i) {
    const double dev = hb.deviation(arc[i]);
    const bool above = dev > hb.sd;
    const bool below = dev < -hb.sd;
    if (open) {
      const bool same_side = open->direction == Side::kAbove ? above : below;
      if (same_side) {
        if (std::fabs(dev) > open_extreme) {
          open_extreme = std::fabs(dev);
          open->peak_index = i;
          open->peak_value = arc[i];
          open->peak_distance = open_extreme - hb.sd;
        }
        continue;
      }
      open->return_index = i;
      out.push_back(*open);
      open.reset();
    }
    if (above || below) {
      Displacement d;
      d.exit_index = i;
      d.peak_index = i;
      d.direction = above ? Side::kAbove : Side::kBelow;
      d.peak_value = arc[i];
      d.boundary_value = above ? hb.high : hb.low;
      open_extreme = std::fabs(dev);
      d.peak_distance = open_extreme - hb.sd;
      open = d;
    }
  }
  if (open) out.push_back(*open);
  return out;
}

// Mean over displacements with peak_index > exit_index of
// distance / (peak_index - exit_index). Open displacements count.
inline std::optional<double> rise_rate(std::span<const Displacement> ds) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& d : ds) {
    if (d.peak_index <= d.exit_index) continue;
    sum += d.peak_distance / static_cast<double>(d.peak_index - d.exit_index);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

// Mean over closed displacements with return_index > peak_index of
// distance / (return_index - peak_index). Single-index excursions (out for
// one step and straight back) are skipped, as for the rise rate.
inline std::optional<double> recovery_rate(std::span<const Displacement> ds) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& d : ds) {
    if (!d.closed() || d.single_index() || *d.return_index <= d.peak_index) continue;
    sum += d.peak_distance / static_cast<double>(*d.return_index - d.peak_index);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

inline UedMetrics arc_metrics(std::span<const double> arc) {
  const HomeBase hb = home_base(arc);
  const auto ds = segment_displacements(arc, hb);
  UedMetrics m;
  m.average = average_emotion(arc);
  m.variability = hb.sd;
  m.rise_rate = rise_rate(ds);
  m.recovery_rate = recovery_rate(ds);
  m.n_displacements = ds.size();
  return m;
}

// Metrics for one speaker across all three dimensions.
struct SpeakerUed {
  std::string user_id;
  std::string group;
  std::size_t n_posts = 0;
  double avg_likes = 0.0;
  std::array<UedMetrics, 3> metrics;
  std::array<EmotionArc, 3> arcs;  // filled only with UedConfig::keep_arcs

  const UedMetrics& at(Dimension d) const { return metrics[static_cast<std::size_t>(d)]; }
};

// score -> arc -> home base -> metrics, per dimension.
inline std::variant<SpeakerUed, Exclusion> speaker_ued(SpeakerTimeline timeline,
                                                       const Lexicon& lexicon,
                                                       const UedConfig& config) {
  auto scored = score_timeline(std::move(timeline), lexicon);
  if (auto* ex = std::get_if<Exclusion>(&scored)) return *ex;
  const auto& t = std::get<SpeakerTimeline>(scored);

  SpeakerUed out;
  out.user_id = t.user_id;
  out.group = t.group;
  out.n_posts = t.n_posts();
  out.avg_likes = t.avg_likes();
  for (Dimension d : kAllDimensions) {
    const auto scores = scores_of(t.scored_for(d));
    try {
      EmotionArc arc = build_arc(scores, config.window_size, config.step, d);
      out.metrics[static_cast<std::size_t>(d)] = arc_metrics(arc.values);
      if (config.keep_arcs) out.arcs[static_cast<std::size_t>(d)] = std::move(arc);
    } catch (const InsufficientDataError& e) {
      return Exclusion{t.user_id, t.group, e.reason(), e.what()};
    }
  }
  return out;
}

}  // namespace ued

#endif  // UED_DYNAMICS_HPP_
