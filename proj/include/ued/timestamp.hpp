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

#ifndef UED_TIMESTAMP_HPP_
#define UED_TIMESTAMP_HPP_

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace ued {

// Microseconds since 1970-01-01T00:00:00Z.
struct Timestamp {
  std::int64_t micros = 0;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

namespace detail {

// Days since the epoch for a proleptic Gregorian date (Hinnant's algorithm).
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Civil {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

constexpr Civil civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

constexpr bool is_leap(std::int64_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

constexpr unsigned days_in_month(std::int64_t y, unsigned m) {
  constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}
  bool done() const { return i_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[i_]; }
  bool eat(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  std::optional<unsigned> digits(int n) {
    unsigned v = 0;
    for (int k = 0; k < n; ++k) {
      const char c = peek();
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + static_cast<unsigned>(c - '0');
      ++i_;
    }
    return v;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

// Accepts YYYY-MM-DD, optionally followed by [T ]HH:MM[:SS[.fraction]] and
// a zone designator (Z, +HH:MM, +HHMM, +HH). No zone means UTC.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
  detail::Cursor c(s);
  const auto y = c.digits(4);
  if (!y || !c.eat('-')) return std::nullopt;
  const auto mo = c.digits(2);
  if (!mo || !c.eat('-')) return std::nullopt;
  const auto d = c.digits(2);
  if (!d || *mo < 1 || *mo > 12 || *d < 1 || *d > detail::days_in_month(*y, *mo)) {
    return std::nullopt;
  }
  std::int64_t secs = detail::days_from_civil(*y, *mo, *d) * 86400;
  std::int64_t micros = 0;
  if (c.done()) return Timestamp{secs * 1000000};
  if (!c.eat('T') && !c.eat('t') && !c.eat(' ')) return std::nullopt;
  const auto hh = c.digits(2);
  if (!hh || *hh > 23 || !c.eat(':')) return std::nullopt;
  const auto mm = c.digits(2);
  if (!mm || *mm > 59) return std::nullopt;
  unsigned ss = 0;
  if (c.eat(':')) {
    const auto v = c.digits(2);
    if (!v || *v > 60) return std::nullopt;  // allow a leap second
    ss = *v;
    if (c.eat('.') || c.eat(',')) {
      int places = 0;
      while (c.peek() >= '0' && c.peek() <= '9') {
        const int digit = c.peek() - '0';
        if (places < 6) micros = micros * 10 + digit;
        ++places;
        c.digits(1);
      }
      if (places == 0) return std::nullopt;
      for (int k = places; k < 6; ++k) micros *= 10;
    }
  }
  secs += *hh * 3600 + *mm * 60 + ss;
  if (c.eat('Z') || c.eat('z')) {
    // UTC
  } else if (c.peek() == '+' || c.peek() == '-') {
    const int sign = c.peek() == '+' ? 1 : -1;
    c.eat(c.peek());
    const auto oh = c.digits(2);
    if (!oh || *oh > 23) return std::nullopt;
    unsigned om = 0;
    if (c.eat(':')) {
      const auto v = c.digits(2);
      if (!v) return std::nullopt;
      om = *v;
    } else if (!c.done()) {
      const auto v = c.digits(2);
      if (!v) return std::nullopt;
      om = *v;
    }
    if (om > 59) return std::nullopt;
    secs -= sign * static_cast<std::int64_t>(*oh * 3600 + om * 60);
  }
  if (!c.done()) return std::nullopt;
  return Timestamp{secs * 1000000 + micros};
}

// RFC 3339 in UTC; a non-zero fraction is printed as six digits.
inline std::string format_timestamp(Timestamp t) {
  std::int64_t secs = t.micros / 1000000;
  std::int64_t frac = t.micros % 1000000;
  if (frac < 0) {
    frac += 1000000;
    --secs;
  }
  std::int64_t days = secs / 86400;
  std::int64_t rem = secs % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const auto civ = detail::civil_from_days(days);
  char buf[48];
  if (frac == 0) {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(civ.year), civ.month, civ.day,
                  static_cast<long long>(rem / 3600),
                  static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
  } else {
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%06lldZ",
                  static_cast<long long>(civ.year), civ.month, civ.day,
                  static_cast<long long>(rem / 3600),
                  static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60), static_cast<long long>(frac));
  }
  return buf;
}

}  // namespace ued

#endif  // UED_TIMESTAMP_HPP_
