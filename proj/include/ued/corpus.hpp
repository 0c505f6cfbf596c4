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

#ifndef UED_CORPUS_HPP_
#define UED_CORPUS_HPP_

// Ingest of per-post records and the user/post filtering rules applied
// before any emotion scoring.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "ued/error.hpp"
#include "ued/stats/descriptive.hpp"
#include "ued/stopwords.hpp"
#include "ued/text.hpp"
#include "ued/timeline.hpp"
#include "ued/timestamp.hpp"

namespace ued {

struct Post {
  std::string user_id;
  std::string group;
  Timestamp timestamp;
  std::string text;
  std::int64_t likes = 0;
  bool is_retweet = false;
  bool has_url = false;
  std::size_t id = 0;               // position among the user's input posts
  std::vector<std::string> tokens;  // filled by clean_posts
};

struct UserRecord {
  std::string user_id;
  std::string group;
  std::vector<std::string> diagnoses;  // sorted, unique
  std::int64_t follower_count = 0;
  std::vector<Post> posts;
};

// A retweet starts with the token "rt" in any case.
inline bool is_retweet_text(std::string_view text) {
  const auto toks = text::split_whitespace(text);
  if (toks.empty() || toks.front().size() != 2) return false;
  const auto t = toks.front();
  return (t[0] == 'r' || t[0] == 'R') && (t[1] == 't' || t[1] == 'T');
}

inline bool has_url_text(std::string_view text) {
  std::string lower(text);
  for (char& c : lower) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + ('a' - 'A'));
  }
  return lower.find("http://") != std::string::npos ||
         lower.find("https://") != std::string::npos ||
         lower.find("www.") != std::string::npos;
}

// ---------------------------------------------------------------------------
// Ingest

struct IngestResult {
  std::vector<UserRecord> users;  // in order of first appearance
  std::size_t lines = 0;          // non-blank lines seen
  std::size_t malformed = 0;
  std::vector<std::string> malformed_examples;  // first few, with line numbers
};

// Maximum share of malformed lines tolerated per file.
inline constexpr double kMalformedBudget = 0.01;

namespace detail {

inline std::optional<std::string> parse_post_line(const nlohmann::json& j,
                                                  Post& post,
                                                  std::vector<std::string>& diagnoses,
                                                  std::int64_t& followers) {
  if (!j.is_object()) return "not an object";
  auto str = [&](const char* key, std::string& out) -> std::optional<std::string> {
    const auto it = j.find(key);
    if (it == j.end()) return std::string("missing '") + key + "'";
    if (!it->is_string()) return std::string("'") + key + "' is not a string";
    out = it->get<std::string>();
    return std::nullopt;
  };
  auto nonneg = [&](const char* key, std::int64_t& out) -> std::optional<std::string> {
    const auto it = j.find(key);
    if (it == j.end()) return std::string("missing '") + key + "'";
    if (!it->is_number_integer()) return std::string("'") + key + "' is not an integer";
    out = it->get<std::int64_t>();
    if (out < 0) return std::string("'") + key + "' is negative";
    return std::nullopt;
  };
  if (auto e = str("user_id", post.user_id)) return e;
  if (post.user_id.empty()) return "empty 'user_id'";
  if (auto e = str("group", post.group)) return e;
  std::string ts;
  if (auto e = str("timestamp", ts)) return e;
  const auto parsed = parse_timestamp(ts);
  if (!parsed) return "unparseable 'timestamp'";
  post.timestamp = *parsed;
  if (auto e = str("text", post.text)) return e;
  if (auto e = nonneg("likes", post.likes)) return e;
  if (auto e = nonneg("follower_count", followers)) return e;
  const auto dit = j.find("diagnoses");
  if (dit == j.end()) return "missing 'diagnoses'";
  if (!dit->is_array()) return "'diagnoses' is not an array";
  diagnoses.clear();
  for (const auto& d : *dit) {
    if (!d.is_string()) return "'diagnoses' holds a non-string";
    diagnoses.push_back(d.get<std::string>());
  }
  std::sort(diagnoses.begin(), diagnoses.end());
  diagnoses.erase(std::unique(diagnoses.begin(), diagnoses.end()), diagnoses.end());
  return std::nullopt;
}

}  // namespace detail

// Reads line-delimited post records and groups them by user. Malformed lines
// are skipped and counted; more than 1% malformed aborts with an Error.
inline IngestResult ingest(std::istream& in, const std::string& source = "<stream>") {
  IngestResult out;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  std::size_t lineno = 0;
  auto reject = [&](std::size_t ln, const std::string& why) {
    ++out.malformed;
    if (out.malformed_examples.size() < 10) {
      out.malformed_examples.push_back(source + ":" + std::to_string(ln) + ": " + why);
    }
  };
  std::vector<std::string> diagnoses;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    ++out.lines;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      reject(lineno, "invalid JSON");
      continue;
    }
    Post post;
    std::int64_t followers = 0;
    if (auto why = detail::parse_post_line(j, post, diagnoses, followers)) {
      reject(lineno, *why);
      continue;
    }
    post.is_retweet = is_retweet_text(post.text);
    post.has_url = has_url_text(post.text);
    auto [it, fresh] = index.try_emplace(post.user_id, out.users.size());
    if (fresh) {
      UserRecord u;
      u.user_id = post.user_id;
      u.group = post.group;
      u.diagnoses = diagnoses;
      u.follower_count = followers;
      out.users.push_back(std::move(u));
    } else if (out.users[it->second].group != post.group) {
      reject(lineno, "group differs from earlier records of this user");
      continue;
    }
    UserRecord& u = out.users[it->second];
    post.id = u.posts.size();
    u.posts.push_back(std::move(post));
  }
  if (out.lines == 0) throw Error("no records in " + source);
  if (static_cast<double>(out.malformed) >
      kMalformedBudget * static_cast<double>(out.lines)) {
    throw Error(source + ": " + std::to_string(out.malformed) + " of " +
                std::to_string(out.lines) +
                " lines malformed, over the 1% budget" +
                (out.malformed_examples.empty() ? "" : " (first: " + out.malformed_examples.front() + ")"));
  }
  return out;
}

inline IngestResult ingest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file: " + path);
  return ingest(in, path);
}

// Concatenates ingest results; posts of a user seen in several inputs are
// appended in input order.
inline IngestResult merge_ingests(std::vector<IngestResult> parts) {
  IngestResult out;
  std::unordered_map<std::string, std::size_t> index;
  for (auto& part : parts) {
    out.lines += part.lines;
    out.malformed += part.malformed;
    for (auto& ex : part.malformed_examples) out.malformed_examples.push_back(std::move(ex));
    for (auto& u : part.users) {
      auto [it, fresh] = index.try_emplace(u.user_id, out.users.size());
      if (fresh) {
        out.users.push_back(std::move(u));
        continue;
      }
      UserRecord& into = out.users[it->second];
      if (into.group != u.group) {
        throw Error("user '" + u.user_id + "' appears with groups '" + into.group +
                    "' and '" + u.group + "'");
      }
      for (auto& p : u.posts) {
        p.id = into.posts.size();
        into.posts.push_back(std::move(p));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Filtering

enum class FilterRule {
  kComorbidity = 0,
  kFollowerCap,
  kMinPosts,
  kIqr,
  kUrl,
  kRetweet,
  kEmptyPost,
  kEmptyUser,
};

inline constexpr std::size_t kFilterRuleCount = 8;

inline std::string_view to_string(FilterRule r) {
  switch (r) {
    case FilterRule::kComorbidity: return "comorbidity";
    case FilterRule::kFollowerCap: return "follower_cap";
    case FilterRule::kMinPosts: return "min_posts";
    case FilterRule::kIqr: return "iqr";
    case FilterRule::kUrl: return "url";
    case FilterRule::kRetweet: return "retweet";
    case FilterRule::kEmptyPost: return "empty_post";
    case FilterRule::kEmptyUser: return "empty_user";
  }
  return "";
}

struct StageCounts {
  std::size_t users_in = 0;
  std::size_t users_removed = 0;
  std::size_t posts_in = 0;
  std::size_t posts_removed = 0;

  std::size_t users_out() const { return users_in - users_removed; }
  std::size_t posts_out() const { return posts_in - posts_removed; }
};

struct GroupFilterReport {
  std::array<StageCounts, kFilterRuleCount> stages{};
  std::optional<double> iqr_q1;
  std::optional<double> iqr_q3;
  bool iqr_applied = false;

  StageCounts& at(FilterRule r) { return stages[static_cast<std::size_t>(r)]; }
  const StageCounts& at(FilterRule r) const { return stages[static_cast<std::size_t>(r)]; }
};

// Removal counts per rule and group. Each stage's input is the previous
// stage's output, so removed + retained reconciles at every step.
struct FilterReport {
  std::map<std::string, GroupFilterReport> groups;
  std::vector<std::string> warnings;
  std::size_t rules_run = 0;  // stages filled so far, in FilterRule order

  std::size_t users_removed(FilterRule r) const {
    std::size_t n = 0;
    for (const auto& [g, rep] : groups) n += rep.at(r).users_removed;
    return n;
  }
  std::size_t posts_removed(FilterRule r) const {
    std::size_t n = 0;
    for (const auto& [g, rep] : groups) n += rep.at(r).posts_removed;
    return n;
  }
};

struct FilterConfig {
  std::int64_t min_posts = 50;
  std::int64_t max_followers = 5000;
  bool iqr_filter = true;
  std::set<std::string> iqr_exempt_groups;
};

namespace detail {

inline std::map<std::string, std::pair<std::size_t, std::size_t>> tally(
    const std::vector<UserRecord>& users) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> t;
  for (const auto& u : users) {
    auto& e = t[u.group];
    e.first += 1;
    e.second += u.posts.size();
  }
  return t;
}

// Applies `keep` and records the stage for every group present on input.
template <typename Keep>
std::vector<UserRecord> run_user_stage(std::vector<UserRecord> users,
                                       FilterReport& report, FilterRule rule,
                                       Keep&& keep) {
  for (const auto& [g, counts] : tally(users)) {
    auto& s = report.groups[g].at(rule);
    s.users_in = counts.first;
    s.posts_in = counts.second;
  }
  std::vector<UserRecord> kept;
  kept.reserve(users.size());
  for (auto& u : users) {
    if (keep(u)) {
      kept.push_back(std::move(u));
    } else {
      auto& s = report.groups[u.group].at(rule);
      s.users_removed += 1;
      s.posts_removed += u.posts.size();
    }
  }
  report.rules_run = static_cast<std::size_t>(rule) + 1;
  return kept;
}

}  // namespace detail

// User-level rules in fixed order: at most one diagnosis, follower cap,
// minimum post count, then post count within [Q1, Q3] of the user's group
// (quartiles by linear interpolation, over users surviving the earlier
// rules, bounds inclusive). Groups with fewer than 4 users skip the IQR rule
// with a warning.
inline std::pair<std::vector<UserRecord>, FilterReport> filter_users(
    std::vector<UserRecord> users, const FilterConfig& config) {
  FilterReport report;
  for (const auto& u : users) report.groups[u.group];
  users = detail::run_user_stage(std::move(users), report, FilterRule::kComorbidity,
                                 [](const UserRecord& u) { return u.diagnoses.size() <= 1; });
  users = detail::run_user_stage(std::move(users), report, FilterRule::kFollowerCap,
                                 [&](const UserRecord& u) {
                                   return u.follower_count <= config.max_followers;
                                 });
  users = detail::run_user_stage(std::move(users), report, FilterRule::kMinPosts,
                                 [&](const UserRecord& u) {
                                   return static_cast<std::int64_t>(u.posts.size()) >=
                                          config.min_posts;
                                 });

  std::map<std::string, std::pair<double, double>> bounds;
  if (config.iqr_filter) {
    std::map<std::string, std::vector<double>> counts;
    for (const auto& u : users) counts[u.group].push_back(static_cast<double>(u.posts.size()));
    for (auto& [g, cs] : counts) {
      if (config.iqr_exempt_groups.count(g)) continue;
      if (cs.size() < 4) {
        report.warnings.push_back("group '" + g + "' has " + std::to_string(cs.size()) +
                                  " users; IQR rule skipped");
        continue;
      }
      const double q1 = stats::quantile_linear(cs, 0.25);
      const double q3 = stats::quantile_linear(cs, 0.75);
      bounds[g] = {q1, q3};
      auto& rep = report.groups[g];
      rep.iqr_q1 = q1;
      rep.iqr_q3 = q3;
      rep.iqr_applied = true;
    }
  }
  users = detail::run_user_stage(std::move(users), report, FilterRule::kIqr,
                                 [&](const UserRecord& u) {
                                   const auto it = bounds.find(u.group);
                                   if (it == bounds.end()) return true;
                                   const auto n = static_cast<double>(u.posts.size());
                                   return n >= it->second.first && n <= it->second.second;
                                 });
  return {std::move(users), std::move(report)};
}

// ---------------------------------------------------------------------------
// Cleaning

struct CleanConfig {
  StopwordList stopwords = default_stopwords();
};

struct CleanCounts {
  std::size_t url = 0;
  std::size_t retweet = 0;
  std::size_t empty = 0;
};

// Lowercase, split on whitespace, strip surrounding punctuation, drop
// stopwords.
inline std::vector<std::string> tokenize(std::string_view text,
                                         const StopwordList& stopwords) {
  std::vector<std::string> out;
  for (const auto piece : text::split_whitespace(text)) {
    auto tok = text::normalize_token(piece);
    if (tok.empty() || stopwords.contains(tok)) continue;
    out.push_back(std::move(tok));
  }
  return out;
}

// Drops URL posts, then retweets, then posts left with no tokens. Retained
// posts keep their text unchanged and gain `tokens`.
inline UserRecord clean_posts(UserRecord user, const CleanConfig& config,
                              CleanCounts* counts = nullptr) {
  CleanCounts local;
  std::vector<Post> kept;
  kept.reserve(user.posts.size());
  for (auto& p : user.posts) {
    if (p.has_url) {
      ++local.url;
      continue;
    }
    if (p.is_retweet) {
      ++local.retweet;
      continue;
    }
    p.tokens = tokenize(p.text, config.stopwords);
    if (p.tokens.empty()) {
      ++local.empty;
      continue;
    }
    kept.push_back(std::move(p));
  }
  user.posts = std::move(kept);
  if (counts) *counts = local;
  return user;
}

// Concatenates tokens of posts ordered by timestamp (ties keep input order).
inline SpeakerTimeline build_timeline(const UserRecord& user) {
  if (user.posts.empty()) {
    throw Error("user '" + user.user_id + "' has no posts left after cleaning");
  }
  std::vector<const Post*> order;
  order.reserve(user.posts.size());
  for (const auto& p : user.posts) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(), [](const Post* a, const Post* b) {
    return a->timestamp < b->timestamp;
  });
  SpeakerTimeline t;
  t.user_id = user.user_id;
  t.group = user.group;
  t.posts.reserve(order.size());
  for (const Post* p : order) {
    TimelinePost tp;
    tp.id = p->id;
    tp.timestamp = p->timestamp;
    tp.likes = p->likes;
    tp.first_token = t.tokens.size();
    for (const auto& tok : p->tokens) t.tokens.push_back({tok, p->id, p->likes});
    tp.token_count = p->tokens.size();
    t.posts.push_back(tp);
  }
  return t;
}

struct PreprocessResult {
  std::vector<SpeakerTimeline> timelines;  // sorted by (group, user_id)
  FilterReport report;
};

// filter_users, clean_posts on every survivor, then build_timeline. Users
// with nothing left after cleaning are removed under kEmptyUser.
inline PreprocessResult preprocess(std::vector<UserRecord> users,
                                   const FilterConfig& filter,
                                   const CleanConfig& clean) {
  auto [kept, report] = filter_users(std::move(users), filter);
  const auto before = detail::tally(kept);
  for (const auto& [g, c] : before) {
    for (auto r : {FilterRule::kUrl, FilterRule::kRetweet, FilterRule::kEmptyPost}) {
      report.groups[g].at(r).users_in = c.first;
    }
    report.groups[g].at(FilterRule::kUrl).posts_in = c.second;
  }
  std::vector<UserRecord> cleaned;
  cleaned.reserve(kept.size());
  for (auto& u : kept) {
    CleanCounts cc;
    const std::string group = u.group;
    cleaned.push_back(clean_posts(std::move(u), clean, &cc));
    auto& rep = report.groups[group];
    rep.at(FilterRule::kUrl).posts_removed += cc.url;
    rep.at(FilterRule::kRetweet).posts_removed += cc.retweet;
    rep.at(FilterRule::kEmptyPost).posts_removed += cc.empty;
  }
  for (auto& [g, rep] : report.groups) {
    rep.at(FilterRule::kRetweet).posts_in = rep.at(FilterRule::kUrl).posts_out();
    rep.at(FilterRule::kEmptyPost).posts_in = rep.at(FilterRule::kRetweet).posts_out();
  }
  report.rules_run = static_cast<std::size_t>(FilterRule::kEmptyPost) + 1;
  cleaned = detail::run_user_stage(std::move(cleaned), report, FilterRule::kEmptyUser,
                                   [](const UserRecord& u) { return !u.posts.empty(); });

  std::sort(cleaned.begin(), cleaned.end(), [](const UserRecord& a, const UserRecord& b) {
    return std::tie(a.group, a.user_id) < std::tie(b.group, b.user_id);
  });
  PreprocessResult out;
  out.timelines.reserve(cleaned.size());
  for (const auto& u : cleaned) out.timelines.push_back(build_timeline(u));
  out.report = std::move(report);
  return out;
}

inline nlohmann::json filter_report_to_json(const FilterReport& r) {
  nlohmann::json groups = nlohmann::json::object();
  for (const auto& [g, rep] : r.groups) {
    nlohmann::json stages = nlohmann::json::array();
    for (std::size_t i = 0; i < r.rules_run; ++i) {
      const auto& s = rep.stages[i];
      stages.push_back({{"rule", to_string(static_cast<FilterRule>(i))},
                        {"users_in", s.users_in},
                        {"users_removed", s.users_removed},
                        {"users_out", s.users_out()},
                        {"posts_in", s.posts_in},
                        {"posts_removed", s.posts_removed},
                        {"posts_out", s.posts_out()}});
    }
    nlohmann::json jg = {{"stages", std::move(stages)}, {"iqr_applied", rep.iqr_applied}};
    if (rep.iqr_q1) jg["iqr_q1"] = *rep.iqr_q1;
    if (rep.iqr_q3) jg["iqr_q3"] = *rep.iqr_q3;
    groups[g] = std::move(jg);
  }
  return {{"groups", std::move(groups)}, {"warnings", r.warnings}};
}

}  // namespace ued

#endif  // UED_CORPUS_HPP_
