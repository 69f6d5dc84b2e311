#pragma once

#include <array>
#include <optional>
#include <vector>

#include "analogcast/series.hpp"

namespace analogcast {

struct ClimatologyCell {
  double mean = 0.0;
  /// Population SD by default; unset when fewer than 2 samples.
  std::optional<double> sd;
  int count = 0;
};

/// Per day-of-year mean and standard deviation of one series over a
/// fixed period.
class Climatology {
 public:
  Climatology(Date period_start, Date period_end)
      : period_start_(period_start), period_end_(period_end) {}

  const Date& period_start() const { return period_start_; }
  const Date& period_end() const { return period_end_; }

  bool has(const DoyKey& k) const { return cells_[k.slot()].has_value(); }
  const ClimatologyCell& cell(const DoyKey& k) const;
  const std::optional<ClimatologyCell>& maybe_cell(const DoyKey& k) const {
    return cells_[k.slot()];
  }
  void set(const DoyKey& k, ClimatologyCell c) { cells_[k.slot()] = c; }

 private:
  Date period_start_;
  Date period_end_;
  std::array<std::optional<ClimatologyCell>, DoyKey::kSlots> cells_;
};

struct ClimatologyOptions {
  /// Sample (n-1) instead of population (n) standard deviation.
  bool sample_sd = false;
  /// Feb 29 keeps its own statistics at or above this sample count;
  /// below it the cell is synthesized from the Feb 28 / Mar 1 cells.
  int feb29_min_samples = 5;
};

/// Mean/SD per (month, day) from present values within [from, to].
/// Keys with no samples stay absent. Throws DataError when the series
/// has no present value in the period at all.
Climatology compute_climatology(const AlignedSeries& series, const Epoch& epoch,
                                const Date& from, const Date& to,
                                const ClimatologyOptions& options = {});

/// Series minus its day-of-year baseline; mask carried through.
struct AnomalySeries {
  int id = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> present;

  std::size_t size() const { return values.size(); }
  bool is_present(int j) const { return present[std::size_t(j) - 1] != 0; }
  double at(int j) const { return values[std::size_t(j) - 1]; }
};

AnomalySeries anomalies(const AlignedSeries& series, const Epoch& epoch,
                        const Climatology& clim);

struct ExtremeEvent {
  int j = 0;  // day index
  Sign sign = Sign::Positive;
  double anomaly = 0.0;
  double z = 0.0;
};

struct ExtremeDetection {
  std::vector<ExtremeEvent> positives;
  std::vector<ExtremeEvent> negatives;
  /// Present days that could not be classified: SD zero or undefined.
  std::vector<int> degenerate_days;
};

/// Strict two-sided threshold: day j is extreme iff
/// |anomaly[j]| > threshold_sd * sd(doy(j)).
ExtremeDetection detect_extremes(const AnomalySeries& anom, const Epoch& epoch,
                                 const Climatology& clim,
                                 double threshold_sd = 2.0);

struct ExtremeGroup {
  Sign sign = Sign::Positive;
  std::vector<ExtremeEvent> events;  // ascending by day, same sign

  int first_day() const { return events.front().j; }
  int last_day() const { return events.back().j; }
};

/// Greedy chaining of same-sign events: consecutive events at most
/// group_gap days apart share a group.
std::vector<ExtremeGroup> group_extremes(const std::vector<ExtremeEvent>& events,
                                         int group_gap_days = 3);

std::string climatology_to_csv(const Climatology& clim);
std::string extremes_to_csv(const ExtremeDetection& det, const Epoch& epoch);

}  // namespace analogcast
