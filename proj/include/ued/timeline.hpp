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

#ifndef UED_TIMELINE_HPP_
#define UED_TIMELINE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ued/error.hpp"
#include "ued/timestamp.hpp"

namespace ued {

enum class Dimension { kValence = 0, kArousal = 1, kDominance = 2 };

inline constexpr std::array<Dimension, 3> kAllDimensions = {
    Dimension::kValence, Dimension::kArousal, Dimension::kDominance};

inline std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::kValence: return "valence";
    case Dimension::kArousal: return "arousal";
    case Dimension::kDominance: return "dominance";
  }
  return "valence";
}

inline Dimension parse_dimension(std::string_view s) {
  if (s == "valence" || s == "v") return Dimension::kValence;
  if (s == "arousal" || s == "a") return Dimension::kArousal;
  if (s == "dominance" || s == "d") return Dimension::kDominance;
  throw Error("unknown emotion dimension: " + std::string(s));
}

struct TimelineToken {
  std::string text;
  std::size_t post_id = 0;
  std::int64_t likes = 0;
};

struct TimelinePost {
  std::size_t id = 0;
  Timestamp timestamp;
  std::int64_t likes = 0;
  std::size_t first_token = 0;
  std::size_t token_count = 0;
};

// A lexicon hit: ordinal position in the token stream and its score.
struct ScoredPoint {
  std::size_t position = 0;
  double score = 0.0;
};

// One speaker's cleaned utterances in temporal order, flattened to tokens.
// `scored` is filled by score_timeline.
struct SpeakerTimeline {
  std::string user_id;
  std::string group;
  std::vector<TimelinePost> posts;
  std::vector<TimelineToken> tokens;
  std::array<std::vector<ScoredPoint>, 3> scored;

  const std::vector<ScoredPoint>& scored_for(Dimension d) const {
    return scored[static_cast<std::size_t>(d)];
  }

  std::size_t n_posts() const { return posts.size(); }

  double avg_likes() const {
    if (posts.empty()) return 0.0;
    std::int64_t total = 0;
    for (const auto& p : posts) total += p.likes;
    return static_cast<double>(total) / static_cast<double>(posts.size());
  }
};

// Line-delimited form: one object per speaker with its posts in order.
inline nlohmann::json timeline_to_json(const SpeakerTimeline& t) {
  nlohmann::json posts = nlohmann::json::array();
  for (const auto& p : t.posts) {
    nlohmann::json toks = nlohmann::json::array();
    for (std::size_t i = 0; i < p.token_count; ++i) {
      toks.push_back(t.tokens[p.first_token + i].text);
    }
    posts.push_back({{"id", p.id},
                     {"timestamp", format_timestamp(p.timestamp)},
                     {"likes", p.likes},
                     {"tokens", std::move(toks)}});
  }
  return {{"user_id", t.user_id}, {"group", t.group}, {"posts", std::move(posts)}};
}

inline SpeakerTimeline timeline_from_json(const nlohmann::json& j) {
  SpeakerTimeline t;
  t.user_id = j.at("user_id").get<std::string>();
  t.group = j.at("group").get<std::string>();
  for (const auto& jp : j.at("posts")) {
    TimelinePost p;
    p.id = jp.at("id").get<std::size_t>();
    const auto ts = parse_timestamp(jp.at("timestamp").get<std::string>());
    if (!ts) throw Error("timeline for '" + t.user_id + "' has a bad timestamp");
    p.timestamp = *ts;
    p.likes = jp.at("likes").get<std::int64_t>();
    p.first_token = t.tokens.size();
    for (const auto& tok : jp.at("tokens")) {
      t.tokens.push_back({tok.get<std::string>(), p.id, p.likes});
    }
    p.token_count = t.tokens.size() - p.first_token;
    t.posts.push_back(p);
  }
  return t;
}

}  // namespace ued

#endif  // UED_TIMELINE_HPP_
