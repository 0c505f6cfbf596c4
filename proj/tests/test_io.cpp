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


#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "ued/config.hpp"
#include "ued/csv.hpp"
#include "ued/lexicon.hpp"
#include "ued/stopwords.hpp"
#include "ued/text.hpp"
#include "ued/timestamp.hpp"

namespace ued {
namespace {

TEST(Text, NormalizeStripsEdgesAndLowercases) {
  EXPECT_EQ(text::normalize_token("Happy!"), "happy");
  EXPECT_EQ(text::normalize_token("\"(Well)\""), "well");
  EXPECT_EQ(text::normalize_token("don't"), "don't");
  EXPECT_EQ(text::normalize_token("#hashtag"), "hashtag");
  EXPECT_EQ(text::normalize_token("..."), "");
  EXPECT_EQ(text::normalize_token(""), "");
}

TEST(Text, NormalizeHandlesUtf8) {
  EXPECT_EQ(text::normalize_token("Über"), "über");
  EXPECT_EQ(text::normalize_token("«ÉTÉ»"), "été");
  EXPECT_EQ(text::normalize_token("¡Hola!"), "hola");
}

TEST(Text, NormalizeIsIdempotent) {
  testing::Gen g(7);
  const std::string alphabet = "aZ9!?.,'-_ #@Éé";
  for (int i = 0; i < 500; ++i) {
    std::string s;
    const auto n = g.integer(0, 12);
    for (int k = 0; k < n; ++k) s += alphabet[static_cast<std::size_t>(g.integer(0, 12))];
    const auto once = text::normalize_token(s);
    EXPECT_EQ(text::normalize_token(once), once) << s;
  }
}

TEST(Text, SplitWhitespace) {
  const auto parts = text::split_whitespace("  a\tbb \n c  ");
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0], "a");
  EXPECT_EQ(parts[1], "bb");
  EXPECT_EQ(parts[2], "c");
  EXPECT_TRUE(text::split_whitespace("   ").empty());
  EXPECT_EQ(text::trim("  x y \r\n"), "x y");
}

TEST(Stopwords, DefaultListIsNormalized) {
  const auto sw = default_stopwords();
  EXPECT_EQ(sw.size(), kEnglishStopwords.size());
  EXPECT_TRUE(sw.contains("the"));
  EXPECT_TRUE(sw.contains("don't"));
  EXPECT_FALSE(sw.contains("happy"));
}

TEST(Stopwords, LoadSkipsCommentsAndBlanks) {
  const auto dir = testing::scratch_dir("stopwords");
  {
    std::ofstream f(dir / "sw.txt");
    f << "# custom list\n\nFoo\n  bar  \n";
  }
  const auto sw = load_stopwords((dir / "sw.txt").string());
  EXPECT_EQ(sw.size(), 2u);
  EXPECT_TRUE(sw.contains("foo"));
  EXPECT_TRUE(sw.contains("bar"));
  EXPECT_THROW(load_stopwords((dir / "missing.txt").string()), Error);
}

TEST(Timestamp, ParsesCommonForms) {
  const auto a = parse_timestamp("2021-03-04T05:06:07Z");
  ASSERT_TRUE(a);
  EXPECT_EQ(format_timestamp(*a), "2021-03-04T05:06:07Z");
  const auto b = parse_timestamp("2021-03-04 07:06:07+02:00");
  ASSERT_TRUE(b);
  EXPECT_EQ(*a, *b);
  const auto c = parse_timestamp("2021-03-04T05:06:07.250Z");
  ASSERT_TRUE(c);
  EXPECT_EQ(c->micros - a->micros, 250000);
  EXPECT_EQ(format_timestamp(*c), "2021-03-04T05:06:07.250000Z");
  const auto d = parse_timestamp("2021-03-04");
  ASSERT_TRUE(d);
  EXPECT_EQ(format_timestamp(*d), "2021-03-04T00:00:00Z");
  EXPECT_EQ(parse_timestamp("1970-01-01T00:00:00Z")->micros, 0);
}

TEST(Timestamp, RejectsGarbage) {
  for (const char* s : {"", "yesterday", "2021-13-01", "2021-02-30", "2021-01-01T25:00:00Z",
                        "2021-01-01T00:00:00+1", "2021-01-01T00:00:00Zjunk"}) {
    EXPECT_FALSE(parse_timestamp(s)) << s;
  }
}

TEST(Timestamp, RoundTripsRandomInstants) {
  testing::Gen g(11);
  for (int i = 0; i < 2000; ++i) {
    const Timestamp t{g.integer(-2'000'000'000'000'000LL, 4'000'000'000'000'000LL)};
    const auto back = parse_timestamp(format_timestamp(t));
    ASSERT_TRUE(back) << format_timestamp(t);
    EXPECT_EQ(back->micros, t.micros);
  }
}

TEST(Csv, EscapesAndReadsBack) {
  std::ostringstream os;
  csv::write_row(os, {"plain", "with,comma", "with \"quote\"", "multi\nline", ""});
  std::istringstream in(os.str());
  std::vector<std::string> fields;
  std::size_t line = 0;
  ASSERT_TRUE(csv::read_row(in, fields, line));
  ASSERT_EQ(fields.size(), 5u);
  EXPECT_EQ(fields[1], "with,comma");
  EXPECT_EQ(fields[2], "with \"quote\"");
  EXPECT_EQ(fields[3], "multi\nline");
  EXPECT_EQ(fields[4], "");
  EXPECT_FALSE(csv::read_row(in, fields, line));
}

TEST(Csv, DoublesRoundTrip) {
  testing::Gen g(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = g.normal(0.0, 1.0) * std::pow(10.0, static_cast<double>(g.integer(-30, 30)));
    EXPECT_EQ(csv::parse_double(csv::format_double(v), 1), v);
  }
  EXPECT_EQ(csv::format_double(-0.0), "0");
  EXPECT_EQ(csv::format_optional(std::nullopt), "");
  EXPECT_FALSE(csv::parse_optional("", 1));
  EXPECT_THROW(csv::parse_double("abc", 4), ParseError);
}

TEST(Lexicon, LoadsTsvWithHeader) {
  std::istringstream in(
      "word\tvalence\tarousal\tdominance\n"
      "Happy\t0.9\t0.4\t0.5\n"
      "sad\t-0.8\t-0.3\t-0.4\n"
      "happy\t0.1\t0.1\t0.1\n");
  const auto lex = load_lexicon(in, "test");
  EXPECT_EQ(lex.size(), 2u);
  EXPECT_EQ(lex.duplicate_count(), 1u);
  const auto h = lex.lookup("HAPPY!");
  ASSERT_TRUE(h);
  EXPECT_DOUBLE_EQ(h->valence, 0.9);
  EXPECT_DOUBLE_EQ(h->arousal, 0.4);
  EXPECT_DOUBLE_EQ(h->dominance, 0.5);
  EXPECT_FALSE(lex.lookup("neutral"));
  EXPECT_TRUE(lookup(lex, "sad"));
}

TEST(Lexicon, ReportsOffendingLine) {
  const std::vector<std::pair<std::string, std::size_t>> bad = {
      {"a\t0.1\t0.2\n", 1},
      {"a\t0.1\t0.2\t0.3\nb\tx\t0.2\t0.3\n", 2},
      {"a\t0.1\t0.2\t0.3\nb\t0.1\t1.5\t0.3\n", 2},
      {"a\t0.1\t0.2\t0.3\nb\t0.1\tnan\t0.3\n", 2},
      {"a\t0.1\t0.2\t0.3\n\t0.1\t0.2\t0.3\n", 2},
  };
  for (const auto& [textv, line] : bad) {
    std::istringstream in(textv);
    try {
      load_lexicon(in, "bad");
      ADD_FAILURE() << "no error for: " << textv;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << textv;
    }
  }
  std::istringstream empty("word\tv\ta\td\n");
  EXPECT_THROW(load_lexicon(empty, "empty"), Error);
  EXPECT_THROW(load_lexicon("/nonexistent/lexicon.tsv"), Error);
}

TEST(Config, ReadsKeysAndRejectsUnknown) {
  AnalysisConfig c;
  std::istringstream in(
      "# comment\n"
      "window_size = 16\n"
      "alpha=0.01\n"
      "dimensions = valence, d\n"
      "iqr_filter = false\n"
      "iqr_exempt_groups = control\n"
      "levene_center = median\n"
      "input = a.jsonl, b.jsonl\n");
  read_config(in, c);
  EXPECT_EQ(c.window_size, 16u);
  EXPECT_DOUBLE_EQ(c.alpha, 0.01);
  ASSERT_EQ(c.dimensions.size(), 2u);
  EXPECT_EQ(c.dimensions[1], Dimension::kDominance);
  EXPECT_FALSE(c.iqr_filter);
  EXPECT_EQ(c.iqr_exempt_groups.count("control"), 1u);
  EXPECT_EQ(c.levene_center, stats::LeveneCenter::kMedian);
  EXPECT_EQ(c.input_paths.size(), 2u);

  std::istringstream bad("window_size = 16\nwindow = 3\n");
  try {
    read_config(bad, c);
    ADD_FAILURE();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Config, ValidateRejectsOutOfRange) {
  AnalysisConfig c;
  c.validate();
  c.alpha = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.window_size = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.bin_width = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Config, ResolvesPathsAgainstConfigDir) {
  const auto dir = testing::scratch_dir("config");
  {
    std::ofstream f(dir / "run.conf");
    f << "lexicon = lex.tsv\ninput = data/x.jsonl\n";
  }
  const auto c = load_config((dir / "run.conf").string());
  EXPECT_EQ(c.lexicon_path, (dir / "lex.tsv").string());
  EXPECT_EQ(c.input_paths.at(0), (dir / "data/x.jsonl").string());
  EXPECT_EQ(c.output_dir, "ued_out");
}

}  // namespace
}  // namespace ued
