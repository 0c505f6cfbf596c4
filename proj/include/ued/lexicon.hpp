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

#ifndef UED_LEXICON_HPP_
#define UED_LEXICON_HPP_

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ued/error.hpp"
#include "ued/text.hpp"

namespace ued {

// Word-level valence, arousal and dominance association scores, each in
// [-1, 1].
struct VadScore {
  double valence = 0.0;
  double arousal = 0.0;
  double dominance = 0.0;

  friend bool operator==(const VadScore&, const VadScore&) = default;
};

enum class LexiconFormat {
  kVadTsv,  // word<TAB>valence<TAB>arousal<TAB>dominance, optional header
};

namespace detail {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

inline std::optional<double> parse_double(std::string_view s) {
  s = text::trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

}  // namespace detail

// Immutable after load; safe for concurrent lookups.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  std::size_t size() const { return entries_.size(); }
  // Rows dropped because their normalized word was already present.
  std::size_t duplicate_count() const { return duplicates_; }

  // Normalizes `token` the same way keys were normalized at load.
  std::optional<VadScore> lookup(std::string_view token) const {
    return find_normalized(text::normalize_token(token));
  }

  // For tokens that are already normalized (the corpus cleaner output).
  std::optional<VadScore> find_normalized(std::string_view key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  // First occurrence wins. Returns false if the key was already present.
  bool insert(std::string_view word, const VadScore& score) {
    const auto [it, inserted] =
        entries_.try_emplace(text::normalize_token(word), score);
    if (!inserted) ++duplicates_;
    return inserted;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [k, v] : entries_) fn(k, v);
  }

 private:
  std::string name_;
  std::unordered_map<std::string, VadScore, detail::StringHash, std::equal_to<>>
      entries_;
  std::size_t duplicates_ = 0;
};

// Reads a lexicon from a stream. Throws ParseError naming the offending line
// on a wrong column count, a non-numeric or non-finite score, a score outside
// [-1, 1], or an empty word; throws Error if no entries were read.
inline Lexicon load_lexicon(std::istream& in, std::string name,
                            LexiconFormat format = LexiconFormat::kVadTsv) {
  (void)format;
  Lexicon lex(std::move(name));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto cols = detail::split_tabs(line);
    if (cols.size() != 4) {
      throw ParseError("expected 4 tab-separated columns, found " +
                           std::to_string(cols.size()),
                       lineno);
    }
    std::array<double, 3> v{};
    bool numeric = true;
    for (int d = 0; d < 3; ++d) {
      const auto parsed = detail::parse_double(cols[d + 1]);
      if (!parsed) {
        numeric = false;
        break;
      }
      v[d] = *parsed;
    }
    if (!numeric) {
      if (lineno == 1) continue;  // header
      throw ParseError("non-numeric score", lineno);
    }
    for (double x : v) {
      if (!std::isfinite(x)) throw ParseError("non-finite score", lineno);
      if (x < -1.0 || x > 1.0) {
        throw ParseError("score outside [-1, 1]", lineno);
      }
    }
    if (text::normalize_token(cols[0]).empty()) {
      throw ParseError("empty word after normalization", lineno);
    }
    lex.insert(cols[0], VadScore{v[0], v[1], v[2]});
  }
  if (lex.size() == 0) throw Error("lexicon '" + lex.name() + "' is empty");
  return lex;
}

inline Lexicon load_lexicon(const std::string& path,
                            LexiconFormat format = LexiconFormat::kVadTsv) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon file: " + path);
  return load_lexicon(in, path, format);
}

inline std::optional<VadScore> lookup(const Lexicon& lexicon,
                                      std::string_view token) {
  return lexicon.lookup(token);
}

}  // namespace ued

#endif  // UED_LEXICON_HPP_
