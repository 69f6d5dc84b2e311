#include "analogcast/pipeline.hpp"

namespace analogcast {

AnomalyContext::AnomalyContext(const Store& store, PipelineSettings settings)
    : store_(store), settings_(std::move(settings)) {
  clim_from_ = settings_.climatology_from.value_or(store.epoch().start());
  clim_to_ = settings_.climatology_to.value_or(store.epoch().end());
}

void AnomalyContext::prepare(int id) {
  climatology(id);
  anomaly(id);
}

const Climatology& AnomalyContext::climatology(int id) {
  auto it = climatologies_.find(id);
  if (it == climatologies_.end()) {
    it = climatologies_
             .emplace(id, compute_climatology(store_.series(id), store_.epoch(),
                                              clim_from_, clim_to_,
                                              settings_.climatology))
             .first;
  }
  return it->second;
}

const AnomalySeries& AnomalyContext::anomaly(int id) {
  auto it = anomalies_.find(id);
  if (it == anomalies_.end()) {
    it = anomalies_
             .emplace(id, anomalies(store_.series(id), store_.epoch(),
                                    climatology(id)))
             .first;
  }
  return it->second;
}

const ExtremeDetection& AnomalyContext::extremes(int id) {
  auto it = extremes_.find(id);
  if (it == extremes_.end()) {
    it = extremes_
             .emplace(id, detect_extremes(anomaly(id), store_.epoch(),
                                          climatology(id), settings_.threshold_sd))
             .first;
  }
  return it->second;
}

}  // namespace analogcast
