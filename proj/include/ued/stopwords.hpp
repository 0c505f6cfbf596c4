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

#ifndef UED_STOPWORDS_HPP_
#define UED_STOPWORDS_HPP_

#include <array>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_set>

#include "ued/error.hpp"
#include "ued/text.hpp"

namespace ued {

// Normalized words; lookups take string_view without allocating.
class StopwordList {
 public:
  StopwordList() = default;

  template <typename Range>
  explicit StopwordList(const Range& words) {
    for (const auto& w : words) add(w);
  }

  void add(std::string_view word) {
    auto key = text::normalize_token(word);
    if (!key.empty()) words_.insert(std::move(key));
  }

  bool contains(std::string_view normalized) const {
    return words_.find(normalized) != words_.end();
  }

  std::size_t size() const { return words_.size(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_set<std::string, Hash, std::equal_to<>> words_;
};

// The common English list shipped with NLTK.
inline constexpr std::array<std::string_view, 179> kEnglishStopwords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you",
    "you're", "you've", "you'll", "you'd", "your", "yours", "yourself",
    "yourselves", "he", "him", "his", "himself", "she", "she's", "her", "hers",
    "herself", "it", "it's", "its", "itself", "they", "them", "their",
    "theirs", "themselves", "what", "which", "who", "whom", "this", "that",
    "that'll", "these", "those", "am", "is", "are", "was", "were", "be",
    "been", "being", "have", "has", "had", "having", "do", "does", "did",
    "doing", "a", "an", "the", "and", "but", "if", "or", "because", "as",
    "until", "while", "of", "at", "by", "for", "with", "about", "against",
    "between", "into", "through", "during", "before", "after", "above",
    "below", "to", "from", "up", "down", "in", "out", "on", "off", "over",
    "under", "again", "further", "then", "once", "here", "there", "when",
    "where", "why", "how", "all", "any", "both", "each", "few", "more", "most",
    "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so",
    "than", "too", "very", "s", "t", "can", "will", "just", "don", "don't",
    "should", "should've", "now", "d", "ll", "m", "o", "re", "ve", "y", "ain",
    "aren", "aren't", "couldn", "couldn't", "didn", "didn't", "doesn",
    "doesn't", "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't", "isn",
    "isn't", "ma", "mightn", "mightn't", "mustn", "mustn't", "needn",
    "needn't", "shan", "shan't", "shouldn", "shouldn't", "wasn", "wasn't",
    "weren", "weren't", "won", "won't", "wouldn", "wouldn't"};

inline StopwordList default_stopwords() {
  return StopwordList(kEnglishStopwords);
}

// One word per line; blank lines and lines starting with '#' are ignored.
inline StopwordList load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file: " + path);
  StopwordList list;
  std::string line;
  while (std::getline(in, line)) {
    const auto w = text::trim(line);
    if (w.empty() || w.front() == '#') continue;
    list.add(w);
  }
  return list;
}

}  // namespace ued

#endif  // UED_STOPWORDS_HPP_
