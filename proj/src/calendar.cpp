#include "analogcast/calendar.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace analogcast {

namespace {

using std::chrono::sys_days;

int parse_int_field(std::string_view s, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("invalid " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

constexpr std::array<const char*, 12> kMonthNames = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

// Cumulative day counts of a leap year, for DoyKey::slot.
constexpr std::array<int, 12> kLeapCumDays = {
    0, 31, 60, 91, 121, 152, 182, 213, 244, 274, 305, 335};

}  // namespace

Date make_date(int year, int month, int day) {
  Date d{std::chrono::year{year}, std::chrono::month{unsigned(month)},
         std::chrono::day{unsigned(day)}};
  if (!d.ok()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    throw ParseError(std::string("invalid date: ") + buf);
  }
  return d;
}

bool is_valid_date(int year, int month, int day) {
  if (month < 1 || month > 12 || day < 1 || day > 31) return false;
  return Date{std::chrono::year{year}, std::chrono::month{unsigned(month)},
              std::chrono::day{unsigned(day)}}
      .ok();
}

Date parse_date(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
    throw ParseError("expected YYYY-MM-DD date, got '" + std::string(iso) + "'");
  }
  int y = parse_int_field(iso.substr(0, 4), "year");
  int m = parse_int_field(iso.substr(5, 2), "month");
  int d = parse_int_field(iso.substr(8, 2), "day");
  return make_date(y, m, d);
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(d.year()),
                unsigned(d.month()), unsigned(d.day()));
  return buf;
}

long days_between(const Date& a, const Date& b) {
  return (sys_days{b} - sys_days{a}).count();
}

Date add_days(const Date& d, long days) {
  return Date{sys_days{d} + std::chrono::days{days}};
}

DoyKey DoyKey::of(const Date& d) {
  return DoyKey{int(unsigned(d.month())), int(unsigned(d.day()))};
}

int DoyKey::slot() const { return kLeapCumDays[month - 1] + day - 1; }

std::string DoyKey::to_string() const {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d-%02d", month, day);
  return buf;
}

std::string Sector::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d.%d", year, month, third);
  return buf;
}

std::string Sector::to_display_string() const {
  static constexpr std::array<const char*, 3> kThirds = {"beginning", "middle",
                                                         "end"};
  return std::string(kThirds[third - 1]) + " of " + kMonthNames[month - 1] +
         " " + std::to_string(year);
}

Sector Sector::parse(std::string_view s) {
  if (s.size() != 9 || s[4] != '-' || s[7] != '.') {
    throw ParseError("expected YYYY-MM.T sector, got '" + std::string(s) + "'");
  }
  Sector sec;
  sec.year = parse_int_field(s.substr(0, 4), "sector year");
  sec.month = parse_int_field(s.substr(5, 2), "sector month");
  sec.third = parse_int_field(s.substr(8, 1), "sector third");
  if (sec.month < 1 || sec.month > 12 || sec.third < 1 || sec.third > 3) {
    throw ParseError("sector out of range: '" + std::string(s) + "'");
  }
  return sec;
}

Sector sector_of(const Date& d) {
  int day = int(unsigned(d.day()));
  int third = day <= 10 ? 1 : day <= 20 ? 2 : 3;
  return Sector{int(d.year()), int(unsigned(d.month())), third};
}

namespace {
// Absolute sector ordinal, for counting ranges.
long sector_ordinal(const Sector& s) {
  return (long(s.year) * 12 + (s.month - 1)) * 3 + (s.third - 1);
}
}  // namespace

long sector_count(const Date& start, const Date& end) {
  if (days_between(start, end) < 0) {
    throw DataError("sector_count: start " + format_date(start) +
                    " is after end " + format_date(end));
  }
  return sector_ordinal(sector_of(end)) - sector_ordinal(sector_of(start)) + 1;
}

Epoch::Epoch(Date start, int days) : start_(start), days_(days) {
  if (!start.ok()) throw ConfigError("epoch start is not a valid date");
  if (days < 1) throw ConfigError("epoch length must be >= 1 day");
}

Date Epoch::date_of(int j) const {
  if (j < 1) throw DataError("day index must be >= 1, got " + std::to_string(j));
  return add_days(start_, j - 1);
}

int Epoch::index_of(const Date& d) const {
  long diff = days_between(start_, d);
  if (diff < 0) {
    throw DataError("date " + format_date(d) + " precedes epoch start " +
                    format_date(start_));
  }
  return int(diff) + 1;
}

bool Epoch::contains(const Date& d) const {
  long diff = days_between(start_, d);
  return diff >= 0 && diff < days_;
}

Epoch default_epoch() { return Epoch(make_date(1973, 1, 1), kDefaultEpochDays); }

}  // namespace analogcast
