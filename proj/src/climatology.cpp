#include "analogcast/climatology.hpp"

#include <cmath>
#include <cstdio>

#include "analogcast/errors.hpp"

namespace analogcast {

const ClimatologyCell& Climatology::cell(const DoyKey& k) const {
  const auto& c = cells_[k.slot()];
  if (!c) {
    throw DataError("no climatology for day-of-year " + k.to_string());
  }
  return *c;
}

Climatology compute_climatology(const AlignedSeries& series, const Epoch& epoch,
                                const Date& from, const Date& to,
                                const ClimatologyOptions& options) {
  if (days_between(from, to) < 0) {
    throw ConfigError("climatology period is empty: " + format_date(from) +
                      " .. " + format_date(to));
  }
  if (!epoch.contains(from) || !epoch.contains(to)) {
    throw ConfigError("climatology period " + format_date(from) + " .. " +
                      format_date(to) + " exceeds the epoch");
  }

  struct Acc {
    double sum = 0.0;
    double sum_sq = 0.0;
    int n = 0;
  };
  std::array<Acc, DoyKey::kSlots> acc{};

  int j_from = epoch.index_of(from);
  int j_to = epoch.index_of(to);
  long total = 0;
  for (int j = j_from; j <= j_to; ++j) {
    if (!series.is_present(j)) continue;
    double v = series.at(j);
    Acc& a = acc[DoyKey::of(epoch.date_of(j)).slot()];
    a.sum += v;
    a.sum_sq += v * v;
    ++a.n;
    ++total;
  }
  if (total == 0) {
    throw DataError("series " + std::to_string(series.id) +
                    " has no present values in the climatology period");
  }

  Climatology clim(from, to);
  auto make_cell = [&](const Acc& a) {
    ClimatologyCell c;
    c.count = a.n;
    c.mean = a.sum / a.n;
    if (a.n >= 2) {
      double divisor = options.sample_sd ? a.n - 1 : a.n;
      double var = (a.sum_sq - a.sum * a.sum / a.n) / divisor;
      c.sd = std::sqrt(std::max(0.0, var));
    }
    return c;
  };
  for (int m = 1; m <= 12; ++m) {
    for (int d = 1; d <= 31; ++d) {
      if (!is_valid_date(2000, m, d)) continue;  // 2000 is a leap year
      DoyKey key{m, d};
      if (acc[key.slot()].n > 0) clim.set(key, make_cell(acc[key.slot()]));
    }
  }

  // With only a handful of leap days in an archive, Feb 29 statistics are
  // unstable; fall back to the average of the neighboring cells.
  DoyKey feb29{2, 29};
  const auto& own = clim.maybe_cell(feb29);
  if (!own || own->count < options.feb29_min_samples) {
    DoyKey feb28{2, 28}, mar1{3, 1};
    if (clim.has(feb28) && clim.has(mar1)) {
      const ClimatologyCell& a = clim.cell(feb28);
      const ClimatologyCell& b = clim.cell(mar1);
      ClimatologyCell c;
      c.mean = 0.5 * (a.mean + b.mean);
      if (a.sd && b.sd) c.sd = 0.5 * (*a.sd + *b.sd);
      c.count = std::min(a.count, b.count);
      clim.set(feb29, c);
    }
  }
  return clim;
}

AnomalySeries anomalies(const AlignedSeries& series, const Epoch& epoch,
                        const Climatology& clim) {
  AnomalySeries out;
  out.id = series.id;
  out.values.assign(series.size(), 0.0);
  out.present = series.present;
  for (int j = 1; j <= epoch.days(); ++j) {
    if (!series.is_present(j)) continue;
    DoyKey key = DoyKey::of(epoch.date_of(j));
    if (!clim.has(key)) {
      throw DataError("series " + std::to_string(series.id) +
                      ": no climatology for day-of-year " + key.to_string() +
                      " needed at " + format_date(epoch.date_of(j)));
    }
    out.values[std::size_t(j) - 1] = series.at(j) - clim.cell(key).mean;
  }
  return out;
}

ExtremeDetection detect_extremes(const AnomalySeries& anom, const Epoch& epoch,
                                 const Climatology& clim, double threshold_sd) {
  if (!(threshold_sd > 0)) {
    throw ConfigError("extreme threshold must be positive");
  }
  ExtremeDetection det;
  for (int j = 1; j <= epoch.days(); ++j) {
    if (!anom.is_present(j)) continue;
    DoyKey key = DoyKey::of(epoch.date_of(j));
    if (!clim.has(key)) {
      det.degenerate_days.push_back(j);
      continue;
    }
    const ClimatologyCell& c = clim.cell(key);
    if (!c.sd || *c.sd == 0.0) {
      det.degenerate_days.push_back(j);
      continue;
    }
    double a = anom.at(j);
    double bound = threshold_sd * *c.sd;
    if (a > bound) {
      det.positives.push_back(ExtremeEvent{j, Sign::Positive, a, a / *c.sd});
    } else if (a < -bound) {
      det.negatives.push_back(ExtremeEvent{j, Sign::Negative, a, a / *c.sd});
    }
  }
  return det;
}

std::vector<ExtremeGroup> group_extremes(const std::vector<ExtremeEvent>& events,
                                         int group_gap_days) {
  std::vector<ExtremeGroup> groups;
  for (const ExtremeEvent& e : events) {
    if (!groups.empty() && e.sign == groups.back().sign &&
        e.j - groups.back().last_day() <= group_gap_days) {
      groups.back().events.push_back(e);
    } else {
      groups.push_back(ExtremeGroup{e.sign, {e}});
    }
  }
  return groups;
}

std::string climatology_to_csv(const Climatology& clim) {
  std::string out = "month,day,mean,sd,n\n";
  char buf[96];
  for (int m = 1; m <= 12; ++m) {
    for (int d = 1; d <= 31; ++d) {
      if (!is_valid_date(2000, m, d)) continue;
      DoyKey key{m, d};
      if (!clim.has(key)) continue;
      const ClimatologyCell& c = clim.cell(key);
      if (c.sd) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.9g,%.9g,%d\n", m, d, c.mean,
                      *c.sd, c.count);
      } else {
        std::snprintf(buf, sizeof buf, "%d,%d,%.9g,,%d\n", m, d, c.mean,
                      c.count);
      }
      out += buf;
    }
  }
  return out;
}

std::string extremes_to_csv(const ExtremeDetection& det, const Epoch& epoch) {
  std::string out = "date,sign,anomaly,z\n";
  auto emit = [&](const std::vector<ExtremeEvent>& events) {
    char buf[96];
    for (const ExtremeEvent& e : events) {
      std::snprintf(buf, sizeof buf, "%s,%s,%.9g,%.4f\n",
                    format_date(epoch.date_of(e.j)).c_str(),
                    to_string(e.sign).c_str(), e.anomaly, e.z);
      out += buf;
    }
  };
  emit(det.positives);
  emit(det.negatives);
  return out;
}

}  // namespace analogcast
