#pragma once

#include <optional>
#include <string>
#include <vector>

#include "analogcast/pipeline.hpp"

namespace analogcast {

/// Full grid-search configuration: which pairs, window lengths, and
/// lead-times to scan, and what counts as a rule.
struct SearchConfig {
  int target_id = 0;
  Sign sign = Sign::Positive;
  std::vector<int> dataset_ids;
  std::vector<int> n_set;  // summation interval lengths, days
  std::vector<int> l_set;  // lead-times, days (>= 14)
  DayRange learning_range{731, 13879};
  int min_clusters = 4;
  int cluster_gap_days = 30;
  bool allow_equal_pair = false;
  double threshold_sd = 2.0;
  std::optional<Date> climatology_from;
  std::optional<Date> climatology_to;
  bool sample_sd = false;

  /// Sorts and dedupes the sets, then enforces the invariants. Throws
  /// ConfigError with the offending field named.
  void validate(const Epoch& epoch);

  PipelineSettings pipeline_settings() const;

  static SearchConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
};

/// Running pair-anomaly cumulative sums with a validity mask: position
/// t is valid when both inputs are present there. Window queries over
/// [a, b] day ranges are O(1).
struct PairPrefix {
  int i1 = 0;
  int i2 = 0;
  /// prefix[m] = compensated sum of pair anomalies over days 1..m;
  /// prefix[0] = 0. Invalid days contribute 0.
  std::vector<double> prefix;
  std::vector<std::uint8_t> valid;
  /// invalid_count[m] = number of invalid days among days 1..m.
  std::vector<int> invalid_count;

  int days() const { return int(valid.size()); }

  /// Sum over days [end_day - n + 1, end_day]; caller checks validity.
  double sum_ending_at(int end_day, int n) const {
    return prefix[std::size_t(end_day)] - prefix[std::size_t(end_day - n)];
  }
  bool window_valid(int end_day, int n) const {
    return invalid_count[std::size_t(end_day)] ==
           invalid_count[std::size_t(end_day - n)];
  }
};

PairPrefix pair_prefix(const AnomalySeries& a1, const AnomalySeries& a2);

/// Precursor window sum for target day j': the n days ending l days
/// before j'. nullopt when the window touches a masked day. Throws
/// DataError when the window leaves the epoch.
std::optional<double> window_sum(const PairPrefix& p, int target_j, int n, int l);

struct Envelope {
  double min_sum = 0.0;
  double max_sum = 0.0;
};

/// Exact min/max of the window sums ending l days before each given
/// day; skipped windows are ignored. Throws DataError when every
/// window is skipped.
Envelope envelope(const PairPrefix& p, int n, int l,
                  const std::vector<int>& non_extreme_days);

/// Days whose window sum strictly escapes the envelope.
std::vector<int> support(const PairPrefix& p, int n, int l,
                         const std::vector<int>& extreme_days,
                         const Envelope& env);

/// Number of maximal runs of hits with consecutive gaps <= gap_days.
int cluster_count(const std::vector<int>& hits, int gap_days = 30);

/// A mined precursor rule: the six-parameter tuple plus its support.
struct Rule {
  int target_id = 0;
  Sign sign = Sign::Positive;
  int i1 = 0;
  int i2 = 0;
  int n = 0;
  int l = 0;
  double min_sum = 0.0;
  double max_sum = 0.0;
  std::vector<int> hits;  // learning-sample days whose sum escapes
  int clusters = 0;
};

struct MineStats {
  long pairs_scanned = 0;
  long combos_scanned = 0;
  long rules_found = 0;
  long envelope_days = 0;
  long extreme_days = 0;
  double wall_seconds = 0.0;
};

/// The grid search. For every (i1 <= i2, n, l) combination, derives the
/// non-extreme envelope over the learning range and counts clustered
/// escapes on extreme days; combinations reaching min_clusters clusters
/// become rules. Output is sorted by (i1, i2, n, l) and is identical
/// for any thread count.
std::vector<Rule> mine(const Store& store, const SearchConfig& config,
                       int threads = 0, MineStats* stats = nullptr);

std::string rules_to_jsonl(const std::vector<Rule>& rules, const Epoch& epoch);
std::vector<Rule> rules_from_jsonl(const std::string& text, const Epoch& epoch);

}  // namespace analogcast
