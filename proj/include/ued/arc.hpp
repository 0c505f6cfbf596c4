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

#ifndef UED_ARC_HPP_
#define UED_ARC_HPP_

// Emotion arcs: rolling-window means over a speaker's lexicon-scored tokens,
// and the home base band of one standard deviation around the arc mean.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ued/error.hpp"
#include "ued/lexicon.hpp"
#include "ued/timeline.hpp"

namespace ued {

enum class ExclusionReason {
  kNoScoredTokens,
  kTooFewScoredTokens,
  kArcTooShort,
};

inline std::string_view to_string(ExclusionReason r) {
  switch (r) {
    case ExclusionReason::kNoScoredTokens: return "no_scored_tokens";
    case ExclusionReason::kTooFewScoredTokens: return "too_few_scored_tokens";
    case ExclusionReason::kArcTooShort: return "arc_too_short";
  }
  return "";
}

// A speaker dropped from metric computation, with why.
struct Exclusion {
  std::string user_id;
  std::string group;
  ExclusionReason reason = ExclusionReason::kNoScoredTokens;
  std::string detail;
};

// Raised by build_arc / home_base when the input is too short. speaker_ued
// turns these into Exclusion records.
class InsufficientDataError : public Error {
 public:
  InsufficientDataError(ExclusionReason reason, const std::string& what)
      : Error(what), reason_(reason) {}
  ExclusionReason reason() const { return reason_; }

 private:
  ExclusionReason reason_;
};

struct EmotionArc {
  Dimension dimension = Dimension::kValence;
  std::vector<double> values;
  std::size_t window_size = 1;
  std::size_t step = 1;
};

// Band [mean - sd, mean + sd] with the population sd of the arc.
//
// `sum` and `count` are kept so that deviations can be formed as
// (count * v - sum) / count: adding a constant to every arc value then
// leaves every deviation bit-identical whenever the shifted sums are exact.
struct HomeBase {
  double mean = 0.0;
  double sd = 0.0;
  double low = 0.0;
  double high = 0.0;
  double sum = 0.0;
  double count = 1.0;

  static HomeBase from_band(double mean, double sd) {
    return HomeBase{mean, sd, mean - sd, mean + sd, mean, 1.0};
  }

  double deviation(double v) const { return (count * v - sum) / count; }
};

// Every lexicon hit contributes one point per dimension; OOV tokens none.
// Returns an Exclusion when nothing scored.
inline std::variant<SpeakerTimeline, Exclusion> score_timeline(SpeakerTimeline timeline,
                                                               const Lexicon& lexicon) {
  for (auto& s : timeline.scored) s.clear();
  for (std::size_t i = 0; i < timeline.tokens.size(); ++i) {
    const auto hit = lexicon.find_normalized(timeline.tokens[i].text);
    if (!hit) continue;
    timeline.scored[0].push_back({i, hit->valence});
    timeline.scored[1].push_back({i, hit->arousal});
    timeline.scored[2].push_back({i, hit->dominance});
  }
  if (timeline.scored[0].empty()) {
    return Exclusion{timeline.user_id, timeline.group, ExclusionReason::kNoScoredTokens,
                     std::to_string(timeline.tokens.size()) + " tokens, none in lexicon"};
  }
  return timeline;
}

inline std::vector<double> scores_of(const std::vector<ScoredPoint>& points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.score);
  return out;
}

// values[i] = mean(scores[i*step, i*step + window)).
inline EmotionArc build_arc(std::span<const double> scores, std::size_t window_size,
                            std::size_t step, Dimension dimension = Dimension::kValence) {
  if (window_size == 0 || step == 0) throw DomainError("window_size and step must be positive");
  if (scores.size() < window_size) {
    throw InsufficientDataError(ExclusionReason::kTooFewScoredTokens,
                                std::to_string(scores.size()) + " scored tokens, window needs " +
                                    std::to_string(window_size));
  }
  EmotionArc arc;
  arc.dimension = dimension;
  arc.window_size = window_size;
  arc.step = step;
  const std::size_t n = (scores.size() - window_size) / step + 1;
  arc.values.reserve(n);
  // Sliding double-double sum, renormalised after every update so `hi` is
  // the window sum rounded to nearest. Windows holding the same multiset of
  // scores then get identical values, which keeps peak ties stable.
  double hi = 0.0, lo = 0.0;
  auto two_sum = [](double a, double b, double& err) {
    const double s = a + b;
    const double bp = s - a;
    err = (a - (s - bp)) + (b - bp);
    return s;
  };
  auto add = [&](double x) {
    double e1 = 0.0, e2 = 0.0;
    const double s = two_sum(hi, x, e1);
    hi = two_sum(s, lo + e1, e2);
    lo = e2;
  };
  for (std::size_t i = 0; i < window_size; ++i) add(scores[i]);
  const auto w = static_cast<double>(window_size);
  arc.values.push_back(hi / w);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t b = i * step;
    for (std::size_t k = b - step; k < b; ++k) {
      add(scores[k + window_size]);
      add(-scores[k]);
    }
    arc.values.push_back(hi / w);
  }
  return arc;
}

inline HomeBase home_base(std::span<const double> values) {
  if (values.size() < 2) {
    throw InsufficientDataError(ExclusionReason::kArcTooShort,
                                "arc has " + std::to_string(values.size()) +
                                    " values, home base needs 2");
  }
  HomeBase hb;
  hb.count = static_cast<double>(values.size());
  for (double v : values) hb.sum += v;
  hb.mean = hb.sum / hb.count;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    // Rounding in the sum would otherwise leave a tiny nonzero spread.
    hb.sum = *lo * hb.count;
    hb.mean = *lo;
    hb.low = hb.high = *lo;
    return hb;
  }
  double ss = 0.0;
  for (double v : values) {
    const double d = hb.deviation(v);
    ss += d * d;
  }
  hb.sd = std::sqrt(ss / hb.count);
  hb.low = hb.mean - hb.sd;
  hb.high = hb.mean + hb.sd;
  return hb;
}

inline HomeBase home_base(const EmotionArc& arc) { return home_base(arc.values); }

}  // namespace ued

#endif  // UED_ARC_HPP_
