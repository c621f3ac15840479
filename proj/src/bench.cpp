#include "timehash/bench.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace timehash {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Nearest-rank percentile over an ascending sample.
double percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  auto rank = static_cast<std::size_t>(
      std::ceil(p / 100.0 * static_cast<double>(sorted.size())));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::string fmt(double v, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

// "2H,1H,30M,5M"-style label derived from the measures.
std::string level_label(const Hierarchy& h) {
  std::string out;
  for (int m : h.measures()) {
    if (!out.empty()) out += ',';
    if (m % 60 == 0) {
      out += std::to_string(m / 60) + "H";
    } else {
      out += std::to_string(m) + "M";
    }
  }
  return out;
}

// Distinct open minutes of a document: its 1-minute-baseline term count.
long long open_minute_count(const PoiRecord& poi) {
  std::array<bool, kMinutesPerDay> open{};
  for (const TimeRange& r : poi.ranges) {
    const int lo = std::max(0, r.start);
    const int hi = std::min(kMinutesPerDay, r.end);
    for (int m = lo; m < hi; ++m) open[static_cast<std::size_t>(m)] = true;
  }
  long long n = 0;
  for (bool b : open) n += b ? 1 : 0;
  return n;
}

// Distinct 5-minute blocks touched by a document (sweep baseline).
long long block5_count(const PoiRecord& poi) {
  std::array<bool, kMinutesPerDay / 5> hit{};
  for (const TimeRange& r : poi.ranges) {
    const int lo = std::max(0, r.start);
    const int hi = std::min(kMinutesPerDay, r.end);
    for (int b = lo / 5; b <= (hi - 1) / 5 && hi > lo; ++b) {
      hit[static_cast<std::size_t>(b)] = true;
    }
  }
  long long n = 0;
  for (bool b : hit) n += b ? 1 : 0;
  return n;
}

// (block start, length) tiles of a range's cover, ascending and disjoint.
void cover_blocks(TimeRange r, const Hierarchy& h,
                  std::vector<std::pair<int, int>>& out) {
  out.clear();
  greedy_cover(r.start, r.end, h, [&](MinuteOfDay bs, int depth) {
    out.emplace_back(bs, h.measure(depth - 1));
  });
}

bool blocks_contain(const std::vector<std::pair<int, int>>& blocks, int t) {
  auto it = std::upper_bound(
      blocks.begin(), blocks.end(), t,
      [](int v, const std::pair<int, int>& b) { return v < b.first; });
  if (it == blocks.begin()) return false;
  --it;
  return t < it->first + it->second;
}

struct BucketDef {
  const char* label;
  int lo, hi;  // range lengths covered, inclusive
};

constexpr std::array<BucketDef, 4> kLengthBuckets{{
    {"<1h", 1, 60},
    {"1-4h", 61, 240},
    {"4-12h", 241, 720},
    {"12-24h", 721, 1440},
}};

struct Accum {
  long long count = 0;
  long long key_sum = 0;
  long long len_sum = 0;
  int min_keys = 0;
  int max_keys = 0;

  void add(int keys, int len) {
    if (count == 0) {
      min_keys = max_keys = keys;
    } else {
      min_keys = std::min(min_keys, keys);
      max_keys = std::max(max_keys, keys);
    }
    ++count;
    key_sum += keys;
    len_sum += len;
  }

  KeyStatsBucket finish(const std::string& label, int lo, int hi) const {
    KeyStatsBucket b;
    b.label = label;
    b.min_length = lo;
    b.max_length = hi;
    b.count = count;
    b.min_keys = min_keys;
    b.max_keys = max_keys;
    if (count > 0) {
      b.avg_keys = static_cast<double>(key_sum) / static_cast<double>(count);
      b.naive_avg = static_cast<double>(len_sum) / static_cast<double>(count);
    }
    return b;
  }
};

}  // namespace

KeyStatsReport enumerate_key_stats(const Hierarchy& h) {
  std::array<Accum, 4> per_bucket{};
  Accum overall;
  for (int s = 0; s < kMinutesPerDay; ++s) {
    for (int e = s + 1; e <= kMinutesPerDay; ++e) {
      const int len = e - s;
      const int keys = static_cast<int>(index_term_count(TimeRange{s, e}, h));
      const std::size_t bi = len <= 60 ? 0 : len <= 240 ? 1 : len <= 720 ? 2 : 3;
      per_bucket[bi].add(keys, len);
      overall.add(keys, len);
    }
  }
  KeyStatsReport rep;
  rep.hierarchy = h.to_string();
  for (std::size_t i = 0; i < kLengthBuckets.size(); ++i) {
    rep.buckets.push_back(per_bucket[i].finish(
        kLengthBuckets[i].label, kLengthBuckets[i].lo, kLengthBuckets[i].hi));
  }
  rep.overall = overall.finish("overall", 1, kMinutesPerDay);
  rep.ranges_processed = overall.count;
  return rep;
}

std::vector<AblationVariant> default_ablation_variants() {
  return {
      {"remove 4h", Hierarchy({60, 15, 5, 1})},
      {"remove 1h", Hierarchy({240, 15, 5, 1})},
      {"remove 15m", Hierarchy({240, 60, 5, 1})},
      {"remove 5m", Hierarchy({240, 60, 15, 1})},
      {"remove 1m", Hierarchy({240, 60, 15, 5})},
      {"3-level", Hierarchy({240, 60, 1})},
      {"4-level", Hierarchy({240, 60, 15, 1})},
      {"6-level +30m", Hierarchy({240, 60, 30, 15, 5, 1})},
  };
}

AblationReport ablation(const Hierarchy& base,
                        const std::vector<AblationVariant>& variants) {
  AblationReport rep;
  rep.base_hierarchy = base.to_string();
  rep.base_avg = enumerate_key_stats(base).overall.avg_keys;

  AblationRow full;
  full.label = "full";
  full.hierarchy = base.to_string();
  full.levels = base.levels();
  full.avg_keys = rep.base_avg;
  full.delta_pct = 0.0;
  rep.rows.push_back(full);

  for (const AblationVariant& v : variants) {
    AblationRow row;
    row.label = v.label;
    row.hierarchy = v.hierarchy.to_string();
    row.levels = v.hierarchy.levels();
    row.avg_keys = enumerate_key_stats(v.hierarchy).overall.avg_keys;
    row.delta_pct = (row.avg_keys / rep.base_avg - 1.0) * 100.0;
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<MinuteOfDay> sample_queries(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::vector<MinuteOfDay> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // whole minutes in [08:00, 21:59]
    out.push_back(480 + static_cast<MinuteOfDay>(eng() % 840));
  }
  return out;
}

IndexSizeReport index_size_comparison(const std::vector<PoiRecord>& pois,
                                      const std::vector<Strategy>& strategies,
                                      const std::vector<MinuteOfDay>& queries) {
  IndexSizeReport rep;
  rep.n = pois.size();
  rep.query_count = queries.size();
  rep.hierarchy = Hierarchy().to_string();

  long long minute_sum = 0;
  for (const PoiRecord& poi : pois) minute_sum += open_minute_count(poi);
  rep.minute1_terms_per_doc =
      pois.empty() ? 0.0
                   : static_cast<double>(minute_sum) /
                         static_cast<double>(pois.size());

  std::vector<std::vector<DocHandle>> truth;
  truth.reserve(queries.size());
  for (MinuteOfDay q : queries) truth.push_back(scope_filter(pois, q));

  for (Strategy strategy : strategies) {
    InvertedIndex idx(strategy);
    for (const PoiRecord& poi : pois) idx.index_document(poi);
    idx.freeze();

    IndexSizeRow row;
    row.strategy = to_string(strategy);
    row.terms_per_doc = pois.empty()
                            ? 0.0
                            : static_cast<double>(idx.term_total()) /
                                  static_cast<double>(pois.size());
    row.reduction_pct =
        rep.minute1_terms_per_doc > 0.0
            ? (1.0 - row.terms_per_doc / rep.minute1_terms_per_doc) * 100.0
            : 0.0;
    row.unique_terms = idx.unique_terms();
    row.memory_mb =
        static_cast<double>(idx.memory_estimate_bytes()) / (1024.0 * 1024.0);

    double p_sum = 0.0, r_sum = 0.0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const QueryResult res = idx.point_query(queries[i]);
      const auto [p, r] = precision_recall(res.docs, truth[i]);
      p_sum += p;
      r_sum += r;
    }
    if (!queries.empty()) {
      row.precision = p_sum / static_cast<double>(queries.size());
      row.recall = r_sum / static_cast<double>(queries.size());
    }
    rep.rows.push_back(row);
  }
  return rep;
}

E2eReport end_to_end(const std::vector<PoiRecord>& pois,
                     const std::vector<Strategy>& strategies,
                     std::size_t query_count, std::uint64_t query_seed) {
  E2eReport rep;
  rep.n = pois.size();
  rep.query_count = query_count;
  rep.query_seed = query_seed;
  rep.hierarchy = Hierarchy().to_string();

  const std::vector<MinuteOfDay> queries = sample_queries(query_count, query_seed);

  // The scope pass is both the ground truth and the scan baseline's timing.
  std::vector<std::vector<DocHandle>> truth;
  truth.reserve(queries.size());
  std::vector<double> scope_us;
  scope_us.reserve(queries.size());
  for (MinuteOfDay q : queries) {
    const auto t0 = Clock::now();
    truth.push_back(scope_filter(pois, q));
    scope_us.push_back(ms_since(t0) * 1000.0);
  }

  for (Strategy strategy : strategies) {
    E2eRow row;
    row.strategy = to_string(strategy);

    const auto b0 = Clock::now();
    InvertedIndex idx(strategy);
    for (const PoiRecord& poi : pois) idx.index_document(poi);
    idx.freeze();
    row.build_ms = ms_since(b0);

    std::vector<double> lat_us;
    lat_us.reserve(queries.size());
    double p_sum = 0.0, r_sum = 0.0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const QueryResult res = idx.point_query(queries[i]);
      lat_us.push_back(
          std::chrono::duration<double, std::micro>(res.latency).count());
      const auto [p, r] = precision_recall(res.docs, truth[i]);
      p_sum += p;
      r_sum += r;
    }
    std::sort(lat_us.begin(), lat_us.end());
    row.p50_us = percentile(lat_us, 50.0);
    row.p95_us = percentile(lat_us, 95.0);
    if (!queries.empty()) {
      row.precision = p_sum / static_cast<double>(queries.size());
      row.recall = r_sum / static_cast<double>(queries.size());
    }
    rep.rows.push_back(row);
  }

  E2eRow scope;
  scope.strategy = "scope";
  scope.build_ms = 0.0;  // nothing to build, the corpus is the structure
  std::sort(scope_us.begin(), scope_us.end());
  scope.p50_us = percentile(scope_us, 50.0);
  scope.p95_us = percentile(scope_us, 95.0);
  scope.precision = queries.empty() ? 0.0 : 1.0;
  scope.recall = queries.empty() ? 0.0 : 1.0;
  rep.rows.push_back(scope);
  return rep;
}

ScaleReport scalability(const std::vector<std::size_t>& scales,
                        const DistributionConfig& config,
                        std::size_t query_count, std::uint64_t query_seed,
                        bool use_bitset) {
  if (scales.empty()) {
    throw std::invalid_argument("scalability: at least one scale required");
  }
  for (std::size_t i = 1; i < scales.size(); ++i) {
    if (scales[i] <= scales[i - 1]) {
      throw std::invalid_argument("scalability: scales must be ascending");
    }
  }

  ScaleReport rep;
  rep.seed = config.seed;
  rep.hierarchy = Hierarchy().to_string();
  rep.bitset_path = use_bitset;

  const std::vector<MinuteOfDay> queries = sample_queries(query_count, query_seed);

  // Untimed warmup: first-touch allocator costs would otherwise inflate the
  // smallest scale, which anchors the linearity comparison.
  {
    DistributionConfig warm = config;
    warm.n = scales.front();
    const std::vector<PoiRecord> pois = generate(warm);
    InvertedIndex idx(Strategy::timehash);
    for (const PoiRecord& poi : pois) idx.index_document(poi);
    idx.freeze();
  }

  // Three interleaved sweeps over the scales, keeping each scale's fastest
  // build. A single timed sample is vulnerable to scheduler stalls, and the
  // linearity comparison against the smallest scale amplifies any noise;
  // interleaving spreads each scale's samples across the whole measurement
  // window so one transient episode cannot cover all samples of one scale.
  // Corpora are deterministic per (seed, n), so each sweep regenerates them
  // instead of holding every scale in memory at once.
  constexpr int kBuildSweeps = 3;
  std::vector<double> best_build_ms(scales.size(), 0.0);

  for (int sweep = 0; sweep < kBuildSweeps; ++sweep) {
    const bool last_sweep = sweep + 1 == kBuildSweeps;
    for (std::size_t si = 0; si < scales.size(); ++si) {
      DistributionConfig cfg = config;
      cfg.n = scales[si];
      const std::vector<PoiRecord> pois = generate(cfg);

      const auto b0 = Clock::now();
      InvertedIndex idx(Strategy::timehash);
      for (const PoiRecord& poi : pois) idx.index_document(poi);
      idx.freeze();
      const double ms = ms_since(b0);
      if (sweep == 0 || ms < best_build_ms[si]) best_build_ms[si] = ms;
      if (!last_sweep) continue;

      ScaleRow row;
      row.n = scales[si];
      row.build_ms = best_build_ms[si];
      row.terms_per_doc = pois.empty()
                              ? 0.0
                              : static_cast<double>(idx.term_total()) /
                                    static_cast<double>(pois.size());
      row.unique_terms = idx.unique_terms();
      row.memory_mb =
          static_cast<double>(idx.memory_estimate_bytes()) / (1024.0 * 1024.0);

      std::vector<double> lat_us;
      lat_us.reserve(queries.size());
      if (use_bitset) {
        const BitsetIndex bits(idx);
        for (MinuteOfDay q : queries) {
          const QueryResult res = bits.point_query(q);
          lat_us.push_back(
              std::chrono::duration<double, std::micro>(res.latency).count());
        }
      } else {
        for (MinuteOfDay q : queries) {
          const QueryResult res = idx.point_query(q);
          lat_us.push_back(
              std::chrono::duration<double, std::micro>(res.latency).count());
        }
      }
      std::sort(lat_us.begin(), lat_us.end());
      row.p50_us = percentile(lat_us, 50.0);
      row.p95_us = percentile(lat_us, 95.0);
      rep.rows.push_back(row);
    }
  }
  return rep;
}

std::vector<Hierarchy> default_sweep_configs() {
  return {
      Hierarchy({5}),  // the baseline itself; always 100%
      Hierarchy({60, 5}),
      Hierarchy({60, 30, 5}),
      Hierarchy({120, 60, 5}),
      Hierarchy({120, 60, 30, 5}),
      Hierarchy({120, 60, 30, 15, 5}),
  };
}

SweepReport hierarchy_sweep(const std::vector<Hierarchy>& configs,
                            const std::vector<PoiRecord>& pois) {
  SweepReport rep;
  rep.n = pois.size();
  for (const PoiRecord& poi : pois) rep.baseline_total += block5_count(poi);

  for (const Hierarchy& h : configs) {
    SweepRow row;
    row.label = level_label(h);
    row.hierarchy = h.to_string();
    row.levels = h.levels();
    // Per-range counts; a document's ranges are far enough apart that no
    // block is shared between them, so the sum equals the per-document union.
    for (const PoiRecord& poi : pois) {
      for (const TimeRange& r : poi.ranges) {
        row.total_terms += static_cast<long long>(index_term_count(r, h));
      }
    }
    row.ratio_pct = rep.baseline_total > 0
                        ? 100.0 * static_cast<double>(row.total_terms) /
                              static_cast<double>(rep.baseline_total)
                        : 0.0;
    rep.rows.push_back(row);
  }
  return rep;
}

BitsetIndex::BitsetIndex(const InvertedIndex& src)
    : strategy_(src.strategy()),
      hierarchy_(src.hierarchy()),
      doc_count_(src.doc_count()),
      words_((src.doc_count() + 63) / 64) {
  bits_.reserve(src.unique_terms());
  for (const auto& [term, list] : src.postings_map()) {
    std::vector<std::uint64_t>& w = bits_[term];
    w.assign(words_, 0);
    for (DocHandle d : list) w[d >> 6] |= std::uint64_t{1} << (d & 63);
  }
}

QueryResult BitsetIndex::point_query(MinuteOfDay t,
                                     const std::string& day_prefix) const {
  const auto t0 = Clock::now();
  QueryResult result;
  std::vector<std::uint64_t> acc(words_, 0);
  for (const std::string& term :
       point_query_term_strings(strategy_, hierarchy_, t, day_prefix)) {
    ++result.terms_probed;
    auto it = bits_.find(term);
    if (it == bits_.end()) continue;
    for (std::size_t i = 0; i < words_; ++i) acc[i] |= it->second[i];
  }
  for (std::size_t i = 0; i < words_; ++i) {
    std::uint64_t w = acc[i];
    while (w != 0) {
      result.docs.push_back(static_cast<DocHandle>(
          i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
      w &= w - 1;
    }
  }
  result.latency = Clock::now() - t0;
  return result;
}

namespace {

void record_mismatch(VerifyReport& rep, const std::string& detail) {
  ++rep.mismatches;
  if (rep.details.size() < 8) rep.details.push_back(detail);
}

std::string range_str(int s, int e) {
  return "[" + std::to_string(s) + "," + std::to_string(e) + ")";
}

}  // namespace

VerifyReport verify_exhaustive(const Hierarchy& h, std::uint64_t seed) {
  const auto t0 = Clock::now();
  VerifyReport rep;
  std::mt19937_64 eng(seed);
  const int f = h.finest();

  std::vector<std::pair<int, int>> blocks;
  blocks.reserve(static_cast<std::size_t>(max_key_bound(h)));
  std::array<int, 36> probes{};
  long long range_idx = 0;

  for (int s = 0; s < kMinutesPerDay; ++s) {
    for (int e = s + 1; e <= kMinutesPerDay; ++e, ++range_idx) {
      cover_blocks(TimeRange{s, e}, h, blocks);
      // matching is exact on the outward-snapped range (identical when the
      // finest level is one minute)
      const int ss = s / f * f;
      const int ee = (e + f - 1) / f * f;

      int np = 0;
      auto add = [&](int t) {
        if (t >= 0 && t < kMinutesPerDay) probes[static_cast<std::size_t>(np++)] = t;
      };
      add(s - 1);
      add(s);
      add(e - 1);
      add(e);
      for (int i = 0; i < 32; ++i) {
        probes[static_cast<std::size_t>(np++)] =
            static_cast<int>(eng() % kMinutesPerDay);
      }

      for (int i = 0; i < np; ++i) {
        const int t = probes[static_cast<std::size_t>(i)];
        const bool predicted = blocks_contain(blocks, t);
        const bool oracle = ss <= t && t < ee;
        ++rep.checks;
        if (predicted != oracle) {
          record_mismatch(rep, "range " + range_str(s, e) + " minute " +
                                   std::to_string(t) + ": cover says " +
                                   (predicted ? "open" : "closed") +
                                   ", interval says " +
                                   (oracle ? "open" : "closed"));
        }
      }

      // periodically re-run the same probes through the key strings to pin
      // the block arithmetic to the real term representation
      if ((range_idx & 4095) == 0) {
        std::unordered_set<std::string> terms;
        for (const TimehashKey& key : index_terms(TimeRange{s, e}, h)) {
          terms.insert(key.text);
        }
        for (int i = 0; i < np; ++i) {
          const int t = probes[static_cast<std::size_t>(i)];
          bool hit = false;
          for (const TimehashKey& key : point_query_terms(t, h)) {
            if (terms.count(key.text) != 0) {
              hit = true;
              break;
            }
          }
          ++rep.checks;
          if (hit != blocks_contain(blocks, t)) {
            record_mismatch(rep, "string path diverged: range " +
                                     range_str(s, e) + " minute " +
                                     std::to_string(t));
          }
        }
      }
    }
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

VerifyReport verify_reduced_day(int day_length, const Hierarchy& h) {
  if (day_length <= 0 || day_length > kMinutesPerDay) {
    throw std::invalid_argument(
        "verify_reduced_day: day length must be in (0, 1440]");
  }
  const auto t0 = Clock::now();
  VerifyReport rep;
  const int L = day_length;
  const int k = h.levels();
  const int f = h.finest();

  // one bit per (level, block-start) pair within the shortened day
  std::vector<int> off(static_cast<std::size_t>(k) + 1, 0);
  for (int i = 0; i < k; ++i) {
    off[static_cast<std::size_t>(i) + 1] =
        off[static_cast<std::size_t>(i)] + (L + h.measure(i) - 1) / h.measure(i);
  }
  const int nbits = off[static_cast<std::size_t>(k)];
  const std::size_t words = static_cast<std::size_t>((nbits + 63) / 64);

  std::vector<TimeRange> ranges;
  ranges.reserve(static_cast<std::size_t>(L) * (static_cast<std::size_t>(L) + 1) / 2);
  for (int s = 0; s < L; ++s) {
    for (int e = s + 1; e <= L; ++e) ranges.push_back(TimeRange{s, e});
  }
  const std::size_t nr = ranges.size();

  // index-side terms (greedy cover) and query-side terms (all overlapping
  // blocks per level) as bitmaps over the term-id space
  std::vector<std::uint64_t> cover_bits(nr * words, 0);
  std::vector<std::uint64_t> query_bits(nr * words, 0);
  std::vector<std::pair<int, int>> snapped(nr);
  for (std::size_t i = 0; i < nr; ++i) {
    const TimeRange r = ranges[i];
    std::uint64_t* cb = &cover_bits[i * words];
    greedy_cover(r.start, r.end, h, [&](MinuteOfDay bs, int depth) {
      const int m = h.measure(depth - 1);
      const int id = off[static_cast<std::size_t>(depth) - 1] + bs / m;
      cb[id >> 6] |= std::uint64_t{1} << (id & 63);
    });
    snapped[i] = {r.start / f * f, (r.end + f - 1) / f * f};

    std::uint64_t* qb = &query_bits[i * words];
    for (int lvl = 0; lvl < k; ++lvl) {
      const int m = h.measure(lvl);
      for (int b = r.start / m; b <= (r.end - 1) / m; ++b) {
        const int id = off[static_cast<std::size_t>(lvl)] + b;
        qb[id >> 6] |= std::uint64_t{1} << (id & 63);
      }
    }
  }

  // every range x every query minute
  for (std::size_t i = 0; i < nr; ++i) {
    const std::uint64_t* cb = &cover_bits[i * words];
    for (int t = 0; t < L; ++t) {
      bool predicted = false;
      for (int lvl = 0; lvl < k && !predicted; ++lvl) {
        const int id = off[static_cast<std::size_t>(lvl)] + t / h.measure(lvl);
        predicted = (cb[id >> 6] >> (id & 63)) & 1;
      }
      const bool oracle = snapped[i].first <= t && t < snapped[i].second;
      ++rep.checks;
      if (predicted != oracle) {
        record_mismatch(rep, "point: range " +
                                 range_str(ranges[i].start, ranges[i].end) +
                                 " minute " + std::to_string(t));
      }
    }
  }

  // every range x every query range: shared-term match must equal overlap
  for (std::size_t i = 0; i < nr; ++i) {
    const std::uint64_t* cb = &cover_bits[i * words];
    const int lo = snapped[i].first, hi = snapped[i].second;
    for (std::size_t j = 0; j < nr; ++j) {
      const std::uint64_t* qb = &query_bits[j * words];
      std::uint64_t any = 0;
      for (std::size_t w = 0; w < words; ++w) any |= cb[w] & qb[w];
      const bool predicted = any != 0;
      const bool oracle = lo < ranges[j].end && ranges[j].start < hi;
      ++rep.checks;
      if (predicted != oracle) {
        record_mismatch(rep, "overlap: index " +
                                 range_str(ranges[i].start, ranges[i].end) +
                                 " query " +
                                 range_str(ranges[j].start, ranges[j].end));
      }
    }
  }

  // the same semantics through the real index, spot-checked
  std::vector<PoiRecord> pois;
  pois.reserve(nr);
  for (std::size_t i = 0; i < nr; ++i) {
    PoiRecord poi;
    poi.id = "r" + std::to_string(i);
    poi.ranges.push_back(ranges[i]);
    pois.push_back(std::move(poi));
  }
  InvertedIndex idx(Strategy::timehash, h);
  for (const PoiRecord& poi : pois) idx.index_document(poi);
  idx.freeze();

  for (int t = 0; t < L; ++t) {
    const QueryResult res = idx.point_query(t);
    const std::vector<DocHandle> truth = scope_filter(pois, t);
    ++rep.checks;
    if (res.docs != truth) {
      record_mismatch(rep, "index point query minute " + std::to_string(t) +
                               ": " + std::to_string(res.docs.size()) +
                               " docs vs " + std::to_string(truth.size()));
    }
  }
  for (std::size_t j = 0; j < nr; j += 97) {
    const QueryResult res = idx.range_query(ranges[j]);
    const std::vector<DocHandle> truth = scope_filter_range(pois, ranges[j]);
    ++rep.checks;
    if (res.docs != truth) {
      record_mismatch(rep, "index range query " +
                               range_str(ranges[j].start, ranges[j].end) +
                               ": " + std::to_string(res.docs.size()) +
                               " docs vs " + std::to_string(truth.size()));
    }
  }

  rep.seconds = seconds_since(t0);
  return rep;
}

VerifyReport verify_sampled(std::size_t samples, std::uint64_t seed,
                            const Hierarchy& h) {
  const auto t0 = Clock::now();
  VerifyReport rep;
  std::mt19937_64 eng(seed);
  const int f = h.finest();

  for (std::size_t i = 0; i < samples; ++i) {
    const int s = static_cast<int>(eng() % kMinutesPerDay);
    const int e = s + 1 + static_cast<int>(eng() % static_cast<std::uint64_t>(
                                               kMinutesPerDay - s));
    std::unordered_set<std::string> terms;
    for (const TimehashKey& key : index_terms(TimeRange{s, e}, h)) {
      terms.insert(key.text);
    }
    const int ss = s / f * f;
    const int ee = (e + f - 1) / f * f;

    std::array<int, 36> probes{};
    int np = 0;
    auto add = [&](int t) {
      if (t >= 0 && t < kMinutesPerDay) probes[static_cast<std::size_t>(np++)] = t;
    };
    add(s - 1);
    add(s);
    add(e - 1);
    add(e);
    for (int d = 0; d < 32; ++d) {
      probes[static_cast<std::size_t>(np++)] =
          static_cast<int>(eng() % kMinutesPerDay);
    }

    for (int p = 0; p < np; ++p) {
      const int t = probes[static_cast<std::size_t>(p)];
      bool hit = false;
      for (const TimehashKey& key : point_query_terms(t, h)) {
        if (terms.count(key.text) != 0) {
          hit = true;
          break;
        }
      }
      const bool oracle = ss <= t && t < ee;
      ++rep.checks;
      if (hit != oracle) {
        record_mismatch(rep, "sample range " + range_str(s, e) + " minute " +
                                 std::to_string(t) + ": terms say " +
                                 (hit ? "open" : "closed") +
                                 ", interval says " +
                                 (oracle ? "open" : "closed"));
      }
    }
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

void write_csv(const KeyStatsReport& r, std::ostream& out) {
  out << "# experiment=keystats hierarchy=" << csv_quote(r.hierarchy)
      << " ranges=" << r.ranges_processed << "\n";
  out << "# convention: " << r.convention << "\n";
  out << "bucket,count,avg_keys,min_keys,max_keys,naive_avg\n";
  auto row = [&](const KeyStatsBucket& b) {
    out << b.label << ',' << b.count << ',' << fmt(b.avg_keys, 2) << ','
        << b.min_keys << ',' << b.max_keys << ',' << fmt(b.naive_avg, 2)
        << "\n";
  };
  for (const KeyStatsBucket& b : r.buckets) row(b);
  row(r.overall);
}

void write_csv(const AblationReport& r, std::ostream& out) {
  out << "# experiment=ablation base=" << csv_quote(r.base_hierarchy)
      << " base_avg=" << fmt(r.base_avg, 2) << "\n";
  out << "config,hierarchy,levels,avg_keys,delta_pct\n";
  for (const AblationRow& row : r.rows) {
    out << row.label << ',' << csv_quote(row.hierarchy) << ',' << row.levels
        << ',' << fmt(row.avg_keys, 2) << ',' << fmt(row.delta_pct, 1) << "\n";
  }
}

void write_csv(const IndexSizeReport& r, std::ostream& out) {
  out << "# experiment=indexsize n=" << r.n << " queries=" << r.query_count
      << " hierarchy=" << csv_quote(r.hierarchy)
      << " minute1_terms_per_doc=" << fmt(r.minute1_terms_per_doc, 2) << "\n";
  out << "strategy,terms_per_doc,reduction_pct,unique_terms,memory_mb,"
         "precision,recall\n";
  for (const IndexSizeRow& row : r.rows) {
    out << row.strategy << ',' << fmt(row.terms_per_doc, 2) << ','
        << fmt(row.reduction_pct, 1) << ',' << row.unique_terms << ','
        << fmt(row.memory_mb, 2) << ',' << fmt(row.precision, 3) << ','
        << fmt(row.recall, 3) << "\n";
  }
}

void write_csv(const E2eReport& r, std::ostream& out) {
  out << "# experiment=e2e n=" << r.n << " queries=" << r.query_count
      << " seed=" << r.query_seed << " hierarchy=" << csv_quote(r.hierarchy)
      << "\n";
  out << "strategy,build_ms,p50_us,p95_us,precision,recall\n";
  for (const E2eRow& row : r.rows) {
    out << row.strategy << ',' << fmt(row.build_ms, 1) << ','
        << fmt(row.p50_us, 3) << ',' << fmt(row.p95_us, 3) << ','
        << fmt(row.precision, 3) << ',' << fmt(row.recall, 3) << "\n";
  }
}

void write_csv(const ScaleReport& r, std::ostream& out) {
  out << "# experiment=scale seed=" << r.seed
      << " hierarchy=" << csv_quote(r.hierarchy)
      << " bitset=" << (r.bitset_path ? 1 : 0) << "\n";
  out << "n,terms_per_doc,unique_terms,build_ms,memory_mb,p50_us,p95_us\n";
  for (const ScaleRow& row : r.rows) {
    out << row.n << ',' << fmt(row.terms_per_doc, 2) << ',' << row.unique_terms
        << ',' << fmt(row.build_ms, 1) << ',' << fmt(row.memory_mb, 2) << ','
        << fmt(row.p50_us, 3) << ',' << fmt(row.p95_us, 3) << "\n";
  }
}

void write_csv(const SweepReport& r, std::ostream& out) {
  out << "# experiment=sweep n=" << r.n
      << " baseline_total=" << r.baseline_total << "\n";
  out << "config,hierarchy,levels,total_terms,ratio_pct\n";
  for (const SweepRow& row : r.rows) {
    out << row.label << ',' << csv_quote(row.hierarchy) << ',' << row.levels
        << ',' << row.total_terms << ',' << fmt(row.ratio_pct, 2) << "\n";
  }
}

std::string to_json(const KeyStatsReport& r) {
  nlohmann::json j;
  j["experiment"] = "keystats";
  j["hierarchy"] = r.hierarchy;
  j["ranges_processed"] = r.ranges_processed;
  j["convention"] = r.convention;
  auto bucket = [](const KeyStatsBucket& b) {
    return nlohmann::json{{"label", b.label},       {"count", b.count},
                          {"avg_keys", b.avg_keys}, {"min_keys", b.min_keys},
                          {"max_keys", b.max_keys}, {"naive_avg", b.naive_avg}};
  };
  j["buckets"] = nlohmann::json::array();
  for (const KeyStatsBucket& b : r.buckets) j["buckets"].push_back(bucket(b));
  j["overall"] = bucket(r.overall);
  return j.dump(2);
}

std::string to_json(const AblationReport& r) {
  nlohmann::json j;
  j["experiment"] = "ablation";
  j["base_hierarchy"] = r.base_hierarchy;
  j["base_avg"] = r.base_avg;
  j["rows"] = nlohmann::json::array();
  for (const AblationRow& row : r.rows) {
    j["rows"].push_back({{"config", row.label},
                         {"hierarchy", row.hierarchy},
                         {"levels", row.levels},
                         {"avg_keys", row.avg_keys},
                         {"delta_pct", row.delta_pct}});
  }
  return j.dump(2);
}

std::string to_json(const IndexSizeReport& r) {
  nlohmann::json j;
  j["experiment"] = "indexsize";
  j["n"] = r.n;
  j["queries"] = r.query_count;
  j["hierarchy"] = r.hierarchy;
  j["minute1_terms_per_doc"] = r.minute1_terms_per_doc;
  j["rows"] = nlohmann::json::array();
  for (const IndexSizeRow& row : r.rows) {
    j["rows"].push_back({{"strategy", row.strategy},
                         {"terms_per_doc", row.terms_per_doc},
                         {"reduction_pct", row.reduction_pct},
                         {"unique_terms", row.unique_terms},
                         {"memory_mb", row.memory_mb},
                         {"precision", row.precision},
                         {"recall", row.recall}});
  }
  return j.dump(2);
}

std::string to_json(const E2eReport& r) {
  nlohmann::json j;
  j["experiment"] = "e2e";
  j["n"] = r.n;
  j["queries"] = r.query_count;
  j["seed"] = r.query_seed;
  j["hierarchy"] = r.hierarchy;
  j["rows"] = nlohmann::json::array();
  for (const E2eRow& row : r.rows) {
    j["rows"].push_back({{"strategy", row.strategy},
                         {"build_ms", row.build_ms},
                         {"p50_us", row.p50_us},
                         {"p95_us", row.p95_us},
                         {"precision", row.precision},
                         {"recall", row.recall}});
  }
  return j.dump(2);
}

std::string to_json(const ScaleReport& r) {
  nlohmann::json j;
  j["experiment"] = "scale";
  j["seed"] = r.seed;
  j["hierarchy"] = r.hierarchy;
  j["bitset"] = r.bitset_path;
  j["rows"] = nlohmann::json::array();
  for (const ScaleRow& row : r.rows) {
    j["rows"].push_back({{"n", row.n},
                         {"terms_per_doc", row.terms_per_doc},
                         {"unique_terms", row.unique_terms},
                         {"build_ms", row.build_ms},
                         {"memory_mb", row.memory_mb},
                         {"p50_us", row.p50_us},
                         {"p95_us", row.p95_us}});
  }
  return j.dump(2);
}

std::string to_json(const SweepReport& r) {
  nlohmann::json j;
  j["experiment"] = "sweep";
  j["n"] = r.n;
  j["baseline_total"] = r.baseline_total;
  j["rows"] = nlohmann::json::array();
  for (const SweepRow& row : r.rows) {
    j["rows"].push_back({{"config", row.label},
                         {"hierarchy", row.hierarchy},
                         {"levels", row.levels},
                         {"total_terms", row.total_terms},
                         {"ratio_pct", row.ratio_pct}});
  }
  return j.dump(2);
}

}  // namespace timehash
