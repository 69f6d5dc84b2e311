#pragma once

#include <map>
#include <optional>

#include "analogcast/climatology.hpp"

namespace analogcast {

struct PipelineSettings {
  /// Climatology period; full epoch when unset.
  std::optional<Date> climatology_from;
  std::optional<Date> climatology_to;
  double threshold_sd = 2.0;
  ClimatologyOptions climatology;
};

/// Caches per-dataset climatologies and anomaly series over one store.
/// Call prepare() for every id before any concurrent reads; lookups are
/// then read-only and safe to share across threads.
class AnomalyContext {
 public:
  AnomalyContext(const Store& store, PipelineSettings settings = {});

  const Store& store() const { return store_; }
  const Epoch& epoch() const { return store_.epoch(); }
  const PipelineSettings& settings() const { return settings_; }

  void prepare(int id);
  const Climatology& climatology(int id);
  const AnomalySeries& anomaly(int id);

  /// Extremes of the target over the whole epoch at the configured
  /// threshold.
  const ExtremeDetection& extremes(int id);

 private:
  const Store& store_;
  PipelineSettings settings_;
  Date clim_from_;
  Date clim_to_;
  std::map<int, Climatology> climatologies_;
  std::map<int, AnomalySeries> anomalies_;
  std::map<int, ExtremeDetection> extremes_;
};

}  // namespace analogcast
