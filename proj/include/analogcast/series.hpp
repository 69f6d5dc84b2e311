#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "analogcast/calendar.hpp"

namespace analogcast {

enum class Cadence { Daily, Monthly };

std::string to_string(Cadence c);
Cadence cadence_from_string(std::string_view s);

struct DatasetDescriptor {
  int id = 0;
  std::string name;
  Cadence cadence = Cadence::Daily;
  std::string units;
  std::string path;
  std::vector<double> sentinels = {9999.9, 999.9};
};

/// One dataset's values laid out densely on the global day index.
/// values[t] and present[t] describe day index j = t + 1. values[t] is
/// finite wherever present[t] is nonzero; masked slots hold 0.
struct AlignedSeries {
  int id = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> present;

  std::size_t size() const { return values.size(); }
  bool is_present(int j) const { return present[std::size_t(j) - 1] != 0; }
  double at(int j) const { return values[std::size_t(j) - 1]; }
};

/// Immutable-after-load registry of aligned series sharing one epoch.
class Store {
 public:
  explicit Store(Epoch epoch) : epoch_(std::move(epoch)) {}

  const Epoch& epoch() const { return epoch_; }

  void add(DatasetDescriptor desc, AlignedSeries series);

  bool has(int id) const { return series_.count(id) != 0; }
  const AlignedSeries& series(int id) const;
  const DatasetDescriptor& descriptor(int id) const;
  std::vector<int> ids() const;
  std::size_t size() const { return series_.size(); }

 private:
  Epoch epoch_;
  std::map<int, DatasetDescriptor> descriptors_;
  std::map<int, AlignedSeries> series_;
};

enum class Sign { Positive, Negative };

inline Sign opposite(Sign s) {
  return s == Sign::Positive ? Sign::Negative : Sign::Positive;
}
std::string to_string(Sign s);
Sign sign_from_string(std::string_view s);

/// Inclusive 1-based day-index range.
struct DayRange {
  int first = 1;
  int last = 1;

  int length() const { return last - first + 1; }
  bool contains(int j) const { return j >= first && j <= last; }
  bool operator==(const DayRange&) const = default;
};

}  // namespace analogcast
