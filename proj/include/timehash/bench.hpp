#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "timehash/datagen.hpp"
#include "timehash/index.hpp"

// Experiment harness: exhaustive key-count enumeration, level ablation,
// index-size/accuracy comparison, end-to-end latency, scalability, hierarchy
// sweep, and the oracle-equivalence verification suite. Every report embeds
// the configuration that produced it; everything except wall-clock latency
// fields is deterministic given (seed, config).

namespace timehash {

// --- exhaustive enumeration -------------------------------------------------

struct KeyStatsBucket {
  std::string label;      // "<1h", "1-4h", "4-12h", "12-24h", "overall"
  int min_length = 0;     // range lengths covered, inclusive
  int max_length = 0;
  long long count = 0;    // ranges that fell in the bucket
  double avg_keys = 0.0;
  int min_keys = 0;
  int max_keys = 0;
  double naive_avg = 0.0;  // 1-minute baseline = mean range length
};

struct KeyStatsReport {
  std::string hierarchy;
  std::vector<KeyStatsBucket> buckets;  // the four length buckets
  KeyStatsBucket overall;
  long long ranges_processed = 0;
  // Zero-length ranges carry no keys and are excluded; every non-empty
  // range weighs the same in the averages.
  std::string convention =
      "all 1,037,520 non-empty ranges weighted equally; zero-length excluded";
};

// Walks every range 0 <= start < end <= 1440 and aggregates |index_terms|
// into length buckets. Single pass, a fraction of a second.
KeyStatsReport enumerate_key_stats(const Hierarchy& h);

// --- ablation ----------------------------------------------------------------

struct AblationVariant {
  std::string label;
  Hierarchy hierarchy;
};

struct AblationRow {
  std::string label;
  std::string hierarchy;
  int levels = 0;
  double avg_keys = 0.0;
  double delta_pct = 0.0;  // vs the base hierarchy's overall average
};

struct AblationReport {
  std::string base_hierarchy;
  double base_avg = 0.0;
  std::vector<AblationRow> rows;  // base first, then the variants
};

// Remove-one-level variants of the default hierarchy plus the 3/4/6-level
// alternatives; each re-runs the exhaustive enumeration.
std::vector<AblationVariant> default_ablation_variants();
AblationReport ablation(const Hierarchy& base,
                        const std::vector<AblationVariant>& variants);

// --- corpus experiments -------------------------------------------------------

// Uniform whole minutes in [08:00, 21:59], the daytime query window.
std::vector<MinuteOfDay> sample_queries(std::size_t count, std::uint64_t seed);

struct IndexSizeRow {
  std::string strategy;
  double terms_per_doc = 0.0;
  double reduction_pct = 0.0;  // of minute1's terms/doc
  std::size_t unique_terms = 0;
  double memory_mb = 0.0;
  double precision = 0.0;  // vs scope_filter ground truth, averaged
  double recall = 0.0;
};

struct IndexSizeReport {
  std::size_t n = 0;
  std::size_t query_count = 0;
  std::string hierarchy;
  double minute1_terms_per_doc = 0.0;  // reduction denominator
  std::vector<IndexSizeRow> rows;
};

IndexSizeReport index_size_comparison(const std::vector<PoiRecord>& pois,
                                      const std::vector<Strategy>& strategies,
                                      const std::vector<MinuteOfDay>& queries);

struct E2eRow {
  std::string strategy;  // index strategies plus the "scope" scan row
  double build_ms = 0.0;
  double p50_us = 0.0;
  double p95_us = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct E2eReport {
  std::size_t n = 0;
  std::size_t query_count = 0;
  std::uint64_t query_seed = 0;
  std::string hierarchy;
  std::vector<E2eRow> rows;
};

// Builds each strategy once (wall-clock timed), runs the shared query set
// single-threaded, and reports per-query latency percentiles. The scope
// row needs no build and is its own ground truth.
E2eReport end_to_end(const std::vector<PoiRecord>& pois,
                     const std::vector<Strategy>& strategies,
                     std::size_t query_count = 1000,
                     std::uint64_t query_seed = 7);

struct ScaleRow {
  std::size_t n = 0;
  double terms_per_doc = 0.0;
  std::size_t unique_terms = 0;
  double build_ms = 0.0;
  double memory_mb = 0.0;
  double p50_us = 0.0;
  double p95_us = 0.0;
};

struct ScaleReport {
  std::uint64_t seed = 0;
  std::string hierarchy;
  bool bitset_path = false;
  std::vector<ScaleRow> rows;
};

// Regenerates the corpus at each scale (same seed: smaller scales are
// prefixes of larger ones) and measures timehash build/query costs.
// Scales must be ascending. With use_bitset the queries run against the
// bitset index instead of the posting lists.
ScaleReport scalability(const std::vector<std::size_t>& scales,
                        const DistributionConfig& config,
                        std::size_t query_count = 1000,
                        std::uint64_t query_seed = 7, bool use_bitset = false);

struct SweepRow {
  std::string label;  // derived from the measures, e.g. "1H,5M"
  std::string hierarchy;
  int levels = 0;
  long long total_terms = 0;
  double ratio_pct = 0.0;  // of the 5-minute-only baseline's total
};

struct SweepReport {
  std::size_t n = 0;
  long long baseline_total = 0;  // single-level 5-minute blocks
  std::vector<SweepRow> rows;
};

// Table of total index terms per hierarchy over one corpus, as a fraction
// of the single-level 5-minute baseline.
std::vector<Hierarchy> default_sweep_configs();
SweepReport hierarchy_sweep(const std::vector<Hierarchy>& configs,
                            const std::vector<PoiRecord>& pois);

// --- bitset query path --------------------------------------------------------

// Term -> document bitmap over the source index's handle space. Point
// queries OR the per-level bitmaps; used for large-scale latency runs where
// posting-list concatenation would dominate.
class BitsetIndex {
 public:
  explicit BitsetIndex(const InvertedIndex& src);

  QueryResult point_query(MinuteOfDay t, const std::string& day_prefix = {}) const;

  std::size_t doc_count() const { return doc_count_; }
  std::size_t words_per_term() const { return words_; }

 private:
  Strategy strategy_;
  Hierarchy hierarchy_;
  std::size_t doc_count_ = 0;
  std::size_t words_ = 0;
  std::unordered_map<std::string, std::vector<std::uint64_t>> bits_;
};

// --- verification -------------------------------------------------------------

struct VerifyReport {
  long long checks = 0;
  long long mismatches = 0;
  double seconds = 0.0;
  std::vector<std::string> details;  // first few mismatches, for diagnostics

  bool ok() const { return mismatches == 0; }
};

// Point-query equivalence against the direct interval check, for every
// non-empty range in the day: probed at start-1, start, end-1, end (clamped)
// plus 32 seeded random minutes per range.
VerifyReport verify_exhaustive(const Hierarchy& h = Hierarchy(),
                               std::uint64_t seed = 20260814);

// Every range x every query minute on a shortened day, plus full pairwise
// range-overlap semantics at the term level and spot checks through a real
// index. Defaults to a 240-minute day under (60,15,5,1).
VerifyReport verify_reduced_day(int day_length = 240,
                                const Hierarchy& h = Hierarchy({60, 15, 5, 1}));

// Random ranges, string-level term-set intersection against the oracle.
VerifyReport verify_sampled(std::size_t samples, std::uint64_t seed,
                            const Hierarchy& h = Hierarchy());

// --- report output ------------------------------------------------------------

// CSV with a fixed header row per experiment; report metadata goes first in
// '#' comment lines. to_json returns the same content as one JSON object.
void write_csv(const KeyStatsReport& r, std::ostream& out);
void write_csv(const AblationReport& r, std::ostream& out);
void write_csv(const IndexSizeReport& r, std::ostream& out);
void write_csv(const E2eReport& r, std::ostream& out);
void write_csv(const ScaleReport& r, std::ostream& out);
void write_csv(const SweepReport& r, std::ostream& out);

std::string to_json(const KeyStatsReport& r);
std::string to_json(const AblationReport& r);
std::string to_json(const IndexSizeReport& r);
std::string to_json(const E2eReport& r);
std::string to_json(const ScaleReport& r);
std::string to_json(const SweepReport& r);

}  // namespace timehash
