#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

#include "analogcast/errors.hpp"

namespace analogcast {

// Proleptic Gregorian dates, no time-of-day, no timezones.
using Date = std::chrono::year_month_day;

Date make_date(int year, int month, int day);
bool is_valid_date(int year, int month, int day);

/// Parses "YYYY-MM-DD". Throws ParseError on malformed or impossible dates.
Date parse_date(std::string_view iso);
std::string format_date(const Date& d);

/// Days from a to b (positive when b is later).
long days_between(const Date& a, const Date& b);
Date add_days(const Date& d, long days);

/// Day-of-year key (month, day) used to index per-calendar-day statistics.
/// (2, 29) is a valid key with its own slot.
struct DoyKey {
  int month = 1;
  int day = 1;

  static constexpr int kSlots = 366;

  static DoyKey of(const Date& d);
  /// Dense index in [0, 366), leap-style calendar layout.
  int slot() const;
  std::string to_string() const;

  auto operator<=>(const DoyKey&) const = default;
};

/// One third of a calendar month: days 1-10, 11-20, 21-end.
struct Sector {
  int year = 0;
  int month = 1;
  int third = 1;

  std::string to_string() const;          // "2012-04.2"
  std::string to_display_string() const;  // "middle of Apr 2012"
  static Sector parse(std::string_view s);

  auto operator<=>(const Sector&) const = default;
};

Sector sector_of(const Date& d);

/// Number of distinct sectors intersecting [start, end].
long sector_count(const Date& start, const Date& end);

/// The global 1-based day index space: j = 1 maps to `start`.
class Epoch {
 public:
  Epoch(Date start, int days);

  const Date& start() const { return start_; }
  int days() const { return days_; }
  Date end() const { return date_of(days_); }

  /// index_to_date: j >= 1 required; total over valid inputs.
  Date date_of(int j) const;

  /// date_to_index: inverse of date_of. Throws DataError for dates
  /// before the epoch start. May return j > days() for later dates;
  /// use contains() to range-check.
  int index_of(const Date& d) const;

  bool in_range(int j) const { return j >= 1 && j <= days_; }
  bool contains(const Date& d) const;

  bool operator==(const Epoch&) const = default;

 private:
  Date start_;
  int days_ = 0;
};

/// The 41-year 1973-2013 index space: j = 1 .. 14975.
inline constexpr int kDefaultEpochDays = 14975;
Epoch default_epoch();

}  // namespace analogcast
