#include "analogcast/miner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "analogcast/errors.hpp"

namespace analogcast {

namespace {

using nlohmann::json;

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<int> int_set_from_json(const json& j, const char* field) {
  std::vector<int> out;
  if (j.is_array()) {
    out = j.get<std::vector<int>>();
  } else if (j.is_object() && j.contains("from") && j.contains("to")) {
    int from = j.at("from").get<int>();
    int to = j.at("to").get<int>();
    for (int v = from; v <= to; ++v) out.push_back(v);
  } else {
    throw ParseError(std::string(field) +
                     ": expected an array or {\"from\":a,\"to\":b}");
  }
  return out;
}

}  // namespace

void SearchConfig::validate(const Epoch& epoch) {
  dataset_ids = sorted_unique(std::move(dataset_ids));
  n_set = sorted_unique(std::move(n_set));
  l_set = sorted_unique(std::move(l_set));

  if (target_id < 1) throw ConfigError("target_id must be set");
  if (dataset_ids.empty()) throw ConfigError("dataset_ids is empty");
  if (n_set.empty()) throw ConfigError("n_set is empty");
  if (l_set.empty()) throw ConfigError("l_set is empty");
  if (n_set.front() < 1 || n_set.back() > 365) {
    throw ConfigError("n_set values must lie in [1, 365]");
  }
  if (l_set.front() < 14 || l_set.back() > 365) {
    throw ConfigError("l_set values must lie in [14, 365]");
  }
  if (min_clusters < 1) throw ConfigError("min_clusters must be >= 1");
  if (cluster_gap_days < 0) throw ConfigError("cluster_gap_days must be >= 0");
  if (!(threshold_sd > 0)) throw ConfigError("threshold_sd must be positive");
  if (learning_range.first > learning_range.last) {
    throw ConfigError("learning range is empty");
  }
  int reserve = 1 + l_set.back() + n_set.back();
  if (learning_range.first < reserve) {
    throw ConfigError("learning range must start at day " +
                      std::to_string(reserve) +
                      " or later so every window lies in-epoch (starts at " +
                      std::to_string(learning_range.first) + ")");
  }
  if (learning_range.last > epoch.days()) {
    throw ConfigError("learning range ends past the epoch");
  }
}

PipelineSettings SearchConfig::pipeline_settings() const {
  PipelineSettings s;
  s.climatology_from = climatology_from;
  s.climatology_to = climatology_to;
  s.threshold_sd = threshold_sd;
  s.climatology.sample_sd = sample_sd;
  return s;
}

SearchConfig SearchConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("search config: ") + e.what());
  }
  SearchConfig c;
  try {
    c.target_id = j.at("target_id").get<int>();
    c.sign = sign_from_string(j.at("sign").get<std::string>());
    c.dataset_ids = int_set_from_json(j.at("dataset_ids"), "dataset_ids");
    c.n_set = int_set_from_json(j.at("n_set"), "n_set");
    c.l_set = int_set_from_json(j.at("l_set"), "l_set");
    if (j.contains("learning_range")) {
      c.learning_range.first = j.at("learning_range").at("first").get<int>();
      c.learning_range.last = j.at("learning_range").at("last").get<int>();
    }
    c.min_clusters = j.value("min_clusters", c.min_clusters);
    c.cluster_gap_days = j.value("cluster_gap_days", c.cluster_gap_days);
    c.allow_equal_pair = j.value("allow_equal_pair", c.allow_equal_pair);
    c.threshold_sd = j.value("threshold_sd", c.threshold_sd);
    c.sample_sd = j.value("sample_sd", c.sample_sd);
    if (j.contains("climatology_from")) {
      c.climatology_from = parse_date(j.at("climatology_from").get<std::string>());
    }
    if (j.contains("climatology_to")) {
      c.climatology_to = parse_date(j.at("climatology_to").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("search config: ") + e.what());
  }
  return c;
}

std::string SearchConfig::to_json_text() const {
  json j;
  j["target_id"] = target_id;
  j["sign"] = to_string(sign);
  j["dataset_ids"] = dataset_ids;
  j["n_set"] = n_set;
  j["l_set"] = l_set;
  j["learning_range"] = {{"first", learning_range.first},
                         {"last", learning_range.last}};
  j["min_clusters"] = min_clusters;
  j["cluster_gap_days"] = cluster_gap_days;
  j["allow_equal_pair"] = allow_equal_pair;
  j["threshold_sd"] = threshold_sd;
  j["sample_sd"] = sample_sd;
  if (climatology_from) j["climatology_from"] = format_date(*climatology_from);
  if (climatology_to) j["climatology_to"] = format_date(*climatology_to);
  return j.dump(2) + "\n";
}

PairPrefix pair_prefix(const AnomalySeries& a1, const AnomalySeries& a2) {
  if (a1.size() != a2.size()) {
    throw DataError("pair series length mismatch: " + std::to_string(a1.size()) +
                    " vs " + std::to_string(a2.size()));
  }
  std::size_t days = a1.size();
  PairPrefix p;
  p.i1 = a1.id;
  p.i2 = a2.id;
  p.prefix.resize(days + 1);
  p.valid.resize(days);
  p.invalid_count.resize(days + 1);
  p.prefix[0] = 0.0;
  p.invalid_count[0] = 0;

  // Neumaier-compensated running sum: keeps window sums (differences of
  // prefix entries) accurate over tens of thousands of terms.
  double sum = 0.0, comp = 0.0;
  int invalid = 0;
  for (std::size_t t = 0; t < days; ++t) {
    bool ok = a1.present[t] && a2.present[t];
    p.valid[t] = ok ? 1 : 0;
    if (ok) {
      double x = a1.values[t] + a2.values[t];
      double next = sum + x;
      if (std::abs(sum) >= std::abs(x)) {
        comp += (sum - next) + x;
      } else {
        comp += (x - next) + sum;
      }
      sum = next;
    } else {
      ++invalid;
    }
    p.prefix[t + 1] = sum + comp;
    p.invalid_count[t + 1] = invalid;
  }
  return p;
}

std::optional<double> window_sum(const PairPrefix& p, int target_j, int n, int l) {
  int end_day = target_j - l;
  int start_day = end_day - n + 1;
  if (start_day < 1 || end_day > p.days()) {
    throw DataError("window for day " + std::to_string(target_j) + " (n=" +
                    std::to_string(n) + ", l=" + std::to_string(l) +
                    ") leaves the epoch");
  }
  if (!p.window_valid(end_day, n)) return std::nullopt;
  return p.sum_ending_at(end_day, n);
}

Envelope envelope(const PairPrefix& p, int n, int l,
                  const std::vector<int>& non_extreme_days) {
  Envelope env{std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity()};
  bool any = false;
  for (int j : non_extreme_days) {
    int end_day = j - l;
    if (!p.window_valid(end_day, n)) continue;
    double s = p.sum_ending_at(end_day, n);
    env.min_sum = std::min(env.min_sum, s);
    env.max_sum = std::max(env.max_sum, s);
    any = true;
  }
  if (!any) {
    throw DataError("all envelope windows skipped for n=" + std::to_string(n) +
                    ", l=" + std::to_string(l));
  }
  return env;
}

std::vector<int> support(const PairPrefix& p, int n, int l,
                         const std::vector<int>& extreme_days,
                         const Envelope& env) {
  std::vector<int> hits;
  for (int j : extreme_days) {
    int end_day = j - l;
    if (!p.window_valid(end_day, n)) continue;
    double s = p.sum_ending_at(end_day, n);
    if (s > env.max_sum || s < env.min_sum) hits.push_back(j);
  }
  return hits;
}

int cluster_count(const std::vector<int>& hits, int gap_days) {
  if (hits.empty()) return 0;
  int clusters = 1;
  for (std::size_t k = 1; k < hits.size(); ++k) {
    if (hits[k] - hits[k - 1] > gap_days) ++clusters;
  }
  return clusters;
}

namespace {

struct TargetDays {
  std::vector<int> non_extreme;  // learning days with no extreme of either sign
  std::vector<int> extreme;      // learning days extreme with the target sign
};

TargetDays split_learning_days(AnomalyContext& ctx, const SearchConfig& cfg) {
  const ExtremeDetection& det = ctx.extremes(cfg.target_id);
  const AnomalySeries& target = ctx.anomaly(cfg.target_id);

  std::vector<std::uint8_t> in_extreme_set(std::size_t(ctx.epoch().days()) + 1, 0);
  for (const ExtremeEvent& e : det.positives) in_extreme_set[e.j] = 1;
  for (const ExtremeEvent& e : det.negatives) in_extreme_set[e.j] = 1;
  // Days that cannot be classified (missing target value, zero or
  // undefined SD) take part in neither the envelope nor the support.
  std::vector<std::uint8_t> unclassifiable(std::size_t(ctx.epoch().days()) + 1, 0);
  for (int j : det.degenerate_days) unclassifiable[j] = 1;

  TargetDays days;
  for (int j = cfg.learning_range.first; j <= cfg.learning_range.last; ++j) {
    if (!target.is_present(j) || unclassifiable[j]) continue;
    if (!in_extreme_set[j]) days.non_extreme.push_back(j);
  }
  const auto& signed_events =
      cfg.sign == Sign::Positive ? det.positives : det.negatives;
  for (const ExtremeEvent& e : signed_events) {
    if (cfg.learning_range.contains(e.j)) days.extreme.push_back(e.j);
  }
  return days;
}

struct PairTask {
  int i1;
  int i2;
};

void mine_pair(const PairPrefix& prefix, const SearchConfig& cfg,
               const TargetDays& days, std::vector<Rule>& out, long& combos) {
  for (int n : cfg.n_set) {
    for (int l : cfg.l_set) {
      ++combos;
      Envelope env{std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
      bool any = false;
      for (int j : days.non_extreme) {
        int end_day = j - l;
        if (!prefix.window_valid(end_day, n)) continue;
        double s = prefix.sum_ending_at(end_day, n);
        env.min_sum = std::min(env.min_sum, s);
        env.max_sum = std::max(env.max_sum, s);
        any = true;
      }
      if (!any) continue;  // no classifiable baseline for this geometry

      std::vector<int> hits = support(prefix, n, l, days.extreme, env);
      int clusters = cluster_count(hits, cfg.cluster_gap_days);
      if (clusters >= cfg.min_clusters) {
        out.push_back(Rule{cfg.target_id, cfg.sign, prefix.i1, prefix.i2, n, l,
                           env.min_sum, env.max_sum, std::move(hits), clusters});
      }
    }
  }
}

}  // namespace

std::vector<Rule> mine(const Store& store, const SearchConfig& config,
                       int threads, MineStats* stats) {
  auto t0 = std::chrono::steady_clock::now();

  SearchConfig cfg = config;
  cfg.validate(store.epoch());

  AnomalyContext ctx(store, cfg.pipeline_settings());
  ctx.prepare(cfg.target_id);
  ctx.extremes(cfg.target_id);
  for (int id : cfg.dataset_ids) ctx.prepare(id);

  TargetDays days = split_learning_days(ctx, cfg);

  std::vector<PairTask> tasks;
  for (std::size_t a = 0; a < cfg.dataset_ids.size(); ++a) {
    for (std::size_t b = a; b < cfg.dataset_ids.size(); ++b) {
      if (a == b && !cfg.allow_equal_pair) continue;
      tasks.push_back(PairTask{cfg.dataset_ids[a], cfg.dataset_ids[b]});
    }
  }

  if (threads <= 0) {
    threads = int(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
  }
  threads = std::min<int>(threads, std::max<std::size_t>(tasks.size(), 1));

  // One work unit per pair; per-unit results land in a slot indexed by
  // the task number, so the merged output does not depend on scheduling.
  std::vector<std::vector<Rule>> results(tasks.size());
  std::vector<long> combo_counts(tasks.size(), 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      std::size_t k = next.fetch_add(1);
      if (k >= tasks.size() || failed.load()) break;
      try {
        PairPrefix prefix =
            pair_prefix(ctx.anomaly(tasks[k].i1), ctx.anomaly(tasks[k].i2));
        mine_pair(prefix, cfg, days, results[k], combo_counts[k]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) first_error = e.what();
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw DataError("mining failed: " + first_error);

  std::vector<Rule> rules;
  long combos = 0;
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    combos += combo_counts[k];
    rules.insert(rules.end(), std::make_move_iterator(results[k].begin()),
                 std::make_move_iterator(results[k].end()));
  }

  if (stats) {
    stats->pairs_scanned = long(tasks.size());
    stats->combos_scanned = combos;
    stats->rules_found = long(rules.size());
    stats->envelope_days = long(days.non_extreme.size());
    stats->extreme_days = long(days.extreme.size());
    stats->wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  }
  return rules;
}

std::string rules_to_jsonl(const std::vector<Rule>& rules, const Epoch& epoch) {
  std::string out;
  for (const Rule& r : rules) {
    json j;
    j["target_id"] = r.target_id;
    j["sign"] = to_string(r.sign);
    j["i1"] = r.i1;
    j["i2"] = r.i2;
    j["n"] = r.n;
    j["l"] = r.l;
    j["min_sum"] = r.min_sum;
    j["max_sum"] = r.max_sum;
    json hits = json::array();
    for (int h : r.hits) hits.push_back(format_date(epoch.date_of(h)));
    j["hits"] = std::move(hits);
    j["clusters"] = r.clusters;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<Rule> rules_from_jsonl(const std::string& text, const Epoch& epoch) {
  std::vector<Rule> rules;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      Rule r;
      r.target_id = j.at("target_id").get<int>();
      r.sign = sign_from_string(j.at("sign").get<std::string>());
      r.i1 = j.at("i1").get<int>();
      r.i2 = j.at("i2").get<int>();
      r.n = j.at("n").get<int>();
      r.l = j.at("l").get<int>();
      r.min_sum = j.at("min_sum").get<double>();
      r.max_sum = j.at("max_sum").get<double>();
      for (const json& h : j.at("hits")) {
        r.hits.push_back(epoch.index_of(parse_date(h.get<std::string>())));
      }
      r.clusters = j.at("clusters").get<int>();
      rules.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError("rules line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rules;
}

}  // namespace analogcast
