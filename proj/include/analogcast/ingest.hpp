#pragma once

#include <filesystem>
#include <vector>

#include "analogcast/series.hpp"

namespace analogcast {

/// Loads a JSON manifest: an array of
/// {id, name, cadence, units, path, sentinels}. Relative dataset paths
/// resolve against the manifest's directory. Descriptors come back
/// ordered by id; ids must be unique and contiguous from 1.
std::vector<DatasetDescriptor> load_manifest(const std::filesystem::path& path);

struct DailyRecord {
  Date date;
  double value = 0.0;
  bool missing = false;
};

struct MonthlyRecord {
  int year = 0;
  int month = 0;
  double value = 0.0;
  bool missing = false;
};

/// Parses one dataset file into chronologically sorted daily records.
/// Daily files carry `date,value` rows with ISO dates; monthly files
/// carry `YYYY-MM,value` rows which are expanded to daily by repetition.
/// Sentinel values become missing markers. Duplicate dates are an error.
std::vector<DailyRecord> parse_series(const DatasetDescriptor& desc);

/// Each monthly value repeated over every day of its month.
std::vector<DailyRecord> expand_monthly(const std::vector<MonthlyRecord>& records);

struct AlignResult {
  AlignedSeries series;
  int dropped_out_of_epoch = 0;
};

/// Lays sorted records densely onto the epoch; absent dates are masked.
AlignResult align(int id, const std::vector<DailyRecord>& records,
                  const Epoch& epoch);

/// Persists the whole store as one directory: a JSON manifest plus one
/// versioned binary file per series. save then load is lossless for
/// values, masks, ids, and descriptor metadata.
void store_save(const Store& store, const std::filesystem::path& dir);
Store store_load(const std::filesystem::path& dir);

/// Runs the full manifest -> parse -> align -> Store pipeline.
Store ingest_archive(const std::filesystem::path& manifest_path,
                     const Epoch& epoch);

}  // namespace analogcast
