#include "analogcast/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "analogcast/errors.hpp"
#include "analogcast/io_util.hpp"

namespace analogcast {

namespace {

using nlohmann::json;

constexpr std::uint32_t kSeriesMagic = 0x52534341;  // "ACSR"
constexpr std::uint32_t kStoreVersion = 1;

double parse_value(std::string_view s, const std::string& where) {
  double v = 0.0;
  auto trimmed = s;
  while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t'))
    trimmed.remove_prefix(1);
  while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t' ||
                              trimmed.back() == '\r'))
    trimmed.remove_suffix(1);
  auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), v);
  if (ec != std::errc{} || ptr != trimmed.data() + trimmed.size()) {
    throw ParseError(where + ": invalid numeric value '" + std::string(s) + "'");
  }
  return v;
}

bool is_sentinel(double v, const std::vector<double>& sentinels) {
  return std::any_of(sentinels.begin(), sentinels.end(),
                     [v](double s) { return v == s; });
}

int days_in_month(int year, int month) {
  Date first = make_date(year, month, 1);
  Date next = month == 12 ? make_date(year + 1, 1, 1) : make_date(year, month + 1, 1);
  return int(days_between(first, next));
}

struct Row {
  std::string date_field;
  std::string value_field;
};

// Shared line scanner: strips comments/header, splits `a,b`.
std::vector<std::pair<int, Row>> scan_rows(const std::string& content,
                                           const std::string& file) {
  std::vector<std::pair<int, Row>> rows;
  std::istringstream in(content);
  std::string line;
  int lineno = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError(file + ":" + std::to_string(lineno) +
                       ": expected 'date,value' row, got '" + line + "'");
    }
    Row row{line.substr(0, comma), line.substr(comma + 1)};
    if (first_row) {
      first_row = false;
      if (row.date_field == "date") continue;  // header
    }
    rows.emplace_back(lineno, std::move(row));
  }
  return rows;
}

json require_field(const json& obj, const char* key, std::size_t entry) {
  if (!obj.contains(key)) {
    throw ParseError("manifest entry " + std::to_string(entry) +
                     ": missing field '" + key + "'");
  }
  return obj.at(key);
}

}  // namespace

std::vector<DatasetDescriptor> load_manifest(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError("manifest " + path.string() + ": " + e.what());
  }
  if (!doc.is_array()) {
    throw ParseError("manifest " + path.string() + ": top level must be an array");
  }
  std::filesystem::path base = path.parent_path();
  std::vector<DatasetDescriptor> out;
  out.reserve(doc.size());
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const json& e = doc[k];
    if (!e.is_object()) {
      throw ParseError("manifest entry " + std::to_string(k) + ": not an object");
    }
    DatasetDescriptor d;
    try {
      d.id = require_field(e, "id", k).get<int>();
      d.name = require_field(e, "name", k).get<std::string>();
      d.cadence = cadence_from_string(require_field(e, "cadence", k).get<std::string>());
      d.units = e.value("units", std::string{});
      d.path = require_field(e, "path", k).get<std::string>();
      if (e.contains("sentinels")) {
        d.sentinels = e.at("sentinels").get<std::vector<double>>();
      }
    } catch (const json::exception& ex) {
      throw ParseError("manifest entry " + std::to_string(k) + ": " + ex.what());
    }
    std::filesystem::path p(d.path);
    if (p.is_relative()) d.path = (base / p).string();
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t k = 0; k < out.size(); ++k) {
    int expect = int(k) + 1;
    if (out[k].id != expect) {
      if (k > 0 && out[k].id == out[k - 1].id) {
        throw ParseError("manifest: duplicate dataset id " +
                         std::to_string(out[k].id));
      }
      throw ParseError("manifest: dataset ids must be contiguous from 1; "
                       "expected id " + std::to_string(expect) + ", found " +
                       std::to_string(out[k].id));
    }
  }
  return out;
}

std::vector<DailyRecord> parse_series(const DatasetDescriptor& desc) {
  std::string content = read_file(desc.path);
  auto rows = scan_rows(content, desc.path);

  std::vector<DailyRecord> daily;
  if (desc.cadence == Cadence::Daily) {
    daily.reserve(rows.size());
    for (const auto& [lineno, row] : rows) {
      DailyRecord rec;
      try {
        rec.date = parse_date(row.date_field);
      } catch (const ParseError& e) {
        throw ParseError(desc.path + ":" + std::to_string(lineno) + ": " + e.what());
      }
      rec.value = parse_value(row.value_field,
                              desc.path + ":" + std::to_string(lineno));
      rec.missing = is_sentinel(rec.value, desc.sentinels);
      if (rec.missing) rec.value = 0.0;
      daily.push_back(rec);
    }
  } else {
    std::vector<MonthlyRecord> monthly;
    monthly.reserve(rows.size());
    for (const auto& [lineno, row] : rows) {
      const std::string& f = row.date_field;
      std::string where = desc.path + ":" + std::to_string(lineno);
      if (f.size() != 7 || f[4] != '-') {
        throw ParseError(where + ": expected YYYY-MM month, got '" + f + "'");
      }
      MonthlyRecord rec;
      rec.year = int(parse_value(f.substr(0, 4), where));
      rec.month = int(parse_value(f.substr(5, 2), where));
      if (rec.month < 1 || rec.month > 12) {
        throw ParseError(where + ": month out of range in '" + f + "'");
      }
      rec.value = parse_value(row.value_field, where);
      rec.missing = is_sentinel(rec.value, desc.sentinels);
      if (rec.missing) rec.value = 0.0;
      monthly.push_back(rec);
    }
    std::sort(monthly.begin(), monthly.end(), [](const auto& a, const auto& b) {
      return std::pair(a.year, a.month) < std::pair(b.year, b.month);
    });
    for (std::size_t k = 1; k < monthly.size(); ++k) {
      if (monthly[k].year == monthly[k - 1].year &&
          monthly[k].month == monthly[k - 1].month) {
        throw ParseError(desc.path + ": duplicate month " +
                         std::to_string(monthly[k].year) + "-" +
                         std::to_string(monthly[k].month));
      }
    }
    daily = expand_monthly(monthly);
  }

  std::stable_sort(daily.begin(), daily.end(), [](const auto& a, const auto& b) {
    return std::chrono::sys_days{a.date} < std::chrono::sys_days{b.date};
  });
  for (std::size_t k = 1; k < daily.size(); ++k) {
    if (daily[k].date == daily[k - 1].date) {
      throw ParseError(desc.path + ": duplicate date " + format_date(daily[k].date));
    }
  }
  return daily;
}

std::vector<DailyRecord> expand_monthly(const std::vector<MonthlyRecord>& records) {
  std::vector<DailyRecord> out;
  for (const auto& rec : records) {
    int n = days_in_month(rec.year, rec.month);
    for (int d = 1; d <= n; ++d) {
      out.push_back(DailyRecord{make_date(rec.year, rec.month, d), rec.value,
                                rec.missing});
    }
  }
  return out;
}

AlignResult align(int id, const std::vector<DailyRecord>& records,
                  const Epoch& epoch) {
  AlignResult result;
  result.series.id = id;
  result.series.values.assign(std::size_t(epoch.days()), 0.0);
  result.series.present.assign(std::size_t(epoch.days()), 0);
  for (const auto& rec : records) {
    if (!epoch.contains(rec.date)) {
      ++result.dropped_out_of_epoch;
      continue;
    }
    if (rec.missing) continue;
    std::size_t t = std::size_t(epoch.index_of(rec.date)) - 1;
    result.series.values[t] = rec.value;
    result.series.present[t] = 1;
  }
  return result;
}

void store_save(const Store& store, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  json meta;
  meta["format"] = "analogcast-store";
  meta["version"] = kStoreVersion;
  meta["epoch_start"] = format_date(store.epoch().start());
  meta["days"] = store.epoch().days();
  json series_list = json::array();

  for (int id : store.ids()) {
    const DatasetDescriptor& d = store.descriptor(id);
    const AlignedSeries& s = store.series(id);

    char fname[32];
    std::snprintf(fname, sizeof fname, "series_%03d.bin", id);

    std::string blob;
    blob.reserve(24 + s.size() * 9);
    append_u32_le(blob, kSeriesMagic);
    append_u32_le(blob, kStoreVersion);
    append_u32_le(blob, std::uint32_t(id));
    append_u64_le(blob, s.size());
    for (std::uint8_t m : s.present) blob.push_back(char(m));
    for (double v : s.values) append_f64_le(blob, v);
    atomic_write_file(dir / fname, blob);

    json e;
    e["id"] = d.id;
    e["name"] = d.name;
    e["cadence"] = to_string(d.cadence);
    e["units"] = d.units;
    e["path"] = d.path;
    e["sentinels"] = d.sentinels;
    e["file"] = fname;
    series_list.push_back(std::move(e));
  }
  meta["series"] = std::move(series_list);
  atomic_write_file(dir / "store.json", meta.dump(2) + "\n");
}

Store store_load(const std::filesystem::path& dir) {
  json meta;
  try {
    meta = json::parse(read_file(dir / "store.json"));
  } catch (const json::parse_error& e) {
    throw DataError("corrupt store manifest in " + dir.string() + ": " + e.what());
  }
  if (meta.value("format", std::string{}) != "analogcast-store") {
    throw DataError(dir.string() + ": not an analogcast store");
  }
  if (meta.value("version", 0u) != kStoreVersion) {
    throw DataError(dir.string() + ": unsupported store version " +
                    std::to_string(meta.value("version", 0u)));
  }

  Epoch epoch(parse_date(meta.at("epoch_start").get<std::string>()),
              meta.at("days").get<int>());
  Store store(epoch);

  for (const json& e : meta.at("series")) {
    DatasetDescriptor d;
    d.id = e.at("id").get<int>();
    d.name = e.at("name").get<std::string>();
    d.cadence = cadence_from_string(e.at("cadence").get<std::string>());
    d.units = e.value("units", std::string{});
    d.path = e.value("path", std::string{});
    d.sentinels = e.value("sentinels", std::vector<double>{});

    std::string blob = read_file(dir / e.at("file").get<std::string>());
    std::size_t pos = 0;
    if (read_u32_le(blob, pos) != kSeriesMagic) {
      throw DataError("corrupt series file for dataset " + std::to_string(d.id) +
                      ": bad magic");
    }
    std::uint32_t ver = read_u32_le(blob, pos);
    if (ver != kStoreVersion) {
      throw DataError("series file for dataset " + std::to_string(d.id) +
                      ": unsupported version " + std::to_string(ver));
    }
    std::uint32_t id_in_file = read_u32_le(blob, pos);
    if (int(id_in_file) != d.id) {
      throw DataError("series file id mismatch: manifest says " +
                      std::to_string(d.id) + ", file says " +
                      std::to_string(id_in_file));
    }
    std::uint64_t n = read_u64_le(blob, pos);
    if (n != std::uint64_t(epoch.days())) {
      throw DataError("series " + std::to_string(d.id) + " has length " +
                      std::to_string(n) + ", epoch has " +
                      std::to_string(epoch.days()) + " days");
    }
    AlignedSeries s;
    s.id = d.id;
    s.present.resize(n);
    s.values.resize(n);
    if (pos + n > blob.size()) {
      throw DataError("truncated series file for dataset " + std::to_string(d.id));
    }
    for (std::uint64_t t = 0; t < n; ++t)
      s.present[t] = std::uint8_t(blob[pos + t]);
    pos += n;
    for (std::uint64_t t = 0; t < n; ++t) s.values[t] = read_f64_le(blob, pos);
    store.add(std::move(d), std::move(s));
  }
  return store;
}

Store ingest_archive(const std::filesystem::path& manifest_path,
                     const Epoch& epoch) {
  Store store(epoch);
  for (DatasetDescriptor& desc : load_manifest(manifest_path)) {
    auto records = parse_series(desc);
    AlignResult aligned = align(desc.id, records, epoch);
    store.add(std::move(desc), std::move(aligned.series));
  }
  return store;
}

}  // namespace analogcast
