#include "analogcast/series.hpp"

#include <cmath>

#include "analogcast/errors.hpp"

namespace analogcast {

std::string to_string(Cadence c) {
  return c == Cadence::Daily ? "daily" : "monthly";
}

Cadence cadence_from_string(std::string_view s) {
  if (s == "daily") return Cadence::Daily;
  if (s == "monthly") return Cadence::Monthly;
  throw ParseError("unknown cadence '" + std::string(s) +
                   "' (expected 'daily' or 'monthly')");
}

std::string to_string(Sign s) {
  return s == Sign::Positive ? "positive" : "negative";
}

Sign sign_from_string(std::string_view s) {
  if (s == "positive") return Sign::Positive;
  if (s == "negative") return Sign::Negative;
  throw ParseError("unknown sign '" + std::string(s) +
                   "' (expected 'positive' or 'negative')");
}

void Store::add(DatasetDescriptor desc, AlignedSeries series) {
  if (series.size() != std::size_t(epoch_.days())) {
    throw DataError("series " + std::to_string(desc.id) + " has length " +
                    std::to_string(series.size()) + ", epoch has " +
                    std::to_string(epoch_.days()) + " days");
  }
  if (series.present.size() != series.values.size()) {
    throw DataError("series " + std::to_string(desc.id) +
                    ": value/mask length mismatch");
  }
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (series.present[t] && !std::isfinite(series.values[t])) {
      throw DataError("series " + std::to_string(desc.id) +
                      ": non-finite value marked present at position " +
                      std::to_string(t + 1));
    }
  }
  int id = desc.id;
  series.id = id;
  descriptors_[id] = std::move(desc);
  series_[id] = std::move(series);
}

const AlignedSeries& Store::series(int id) const {
  auto it = series_.find(id);
  if (it == series_.end()) {
    throw DataError("dataset " + std::to_string(id) + " not in store");
  }
  return it->second;
}

const DatasetDescriptor& Store::descriptor(int id) const {
  auto it = descriptors_.find(id);
  if (it == descriptors_.end()) {
    throw DataError("dataset " + std::to_string(id) + " not in store");
  }
  return it->second;
}

std::vector<int> Store::ids() const {
  std::vector<int> out;
  out.reserve(series_.size());
  for (const auto& [id, _] : series_) out.push_back(id);
  return out;
}

}  // namespace analogcast
