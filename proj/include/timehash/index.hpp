#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "timehash/hierarchy.hpp"
#include "timehash/keygen.hpp"

namespace timehash {

class IndexError : public std::runtime_error {
 public:
  enum class Code { DuplicateDocument, MixedHierarchy, UnsupportedStrategy };

  IndexError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

// A document (business) with one or more open ranges. Midnight-spanning
// inputs are pre-split via split_wrapping before construction. day_tag, when
// non-empty, is prepended to every index term.
struct PoiRecord {
  std::string id;
  std::vector<TimeRange> ranges;
  std::string day_tag;
};

enum class Strategy { timehash, minute1, minute5, hour1 };

Strategy parse_strategy(const std::string& name);
std::string to_string(Strategy s);

using DocHandle = std::uint32_t;

struct QueryResult {
  std::vector<DocHandle> docs;  // sorted, duplicate-free
  std::size_t terms_probed = 0;
  std::chrono::nanoseconds latency{0};
};

// Term -> posting-list map. Posting lists hold document handles (positions
// in insertion order) and stay sorted and duplicate-free because handles
// are assigned monotonically and each document contributes a term at most
// once. Build single-threaded, then freeze(); a frozen index is immutable
// and safe for concurrent readers.
class InvertedIndex {
 public:
  explicit InvertedIndex(Strategy strategy, Hierarchy hierarchy = Hierarchy());

  // Returns the document's term-set size. Throws DuplicateDocument on a
  // repeated id and std::logic_error after freeze().
  std::size_t index_document(const PoiRecord& poi);
  // Guard variant: rejects terms generated under a different hierarchy.
  std::size_t index_document(const PoiRecord& poi, const Hierarchy& h);

  void freeze();
  bool frozen() const { return frozen_; }

  // Point query "open at minute t". Unknown terms contribute empty lists.
  // day_prefix must match the indexed documents' day tags to hit them.
  QueryResult point_query(MinuteOfDay t, const std::string& day_prefix = {}) const;

  // Overlap query; timehash strategy only (UnsupportedStrategy otherwise).
  QueryResult range_query(TimeRange q, const std::string& day_prefix = {}) const;

  Strategy strategy() const { return strategy_; }
  const Hierarchy& hierarchy() const { return hierarchy_; }
  std::size_t doc_count() const { return doc_ids_.size(); }
  std::size_t term_total() const { return term_total_; }
  std::size_t unique_terms() const { return postings_.size(); }
  const std::string& doc_id(DocHandle handle) const { return doc_ids_[handle]; }

  // Posting-entry + dictionary cost model (documented estimate, not RSS).
  std::size_t memory_estimate_bytes() const {
    return term_total_ * 8 + postings_.size() * 64;
  }

  const std::vector<DocHandle>* postings(const std::string& term) const;
  const std::unordered_map<std::string, std::vector<DocHandle>>& postings_map()
      const {
    return postings_;
  }

 private:
  std::vector<std::string> doc_terms(const PoiRecord& poi) const;

  Strategy strategy_;
  Hierarchy hierarchy_;
  bool frozen_ = false;
  std::vector<std::string> doc_ids_;
  std::unordered_map<std::string, DocHandle> id_lookup_;
  std::unordered_map<std::string, std::vector<DocHandle>> postings_;
  std::size_t term_total_ = 0;
};

// The exact term strings point_query probes for minute t under a strategy;
// exposed so alternative query paths (e.g. the bitset index) stay in sync.
std::vector<std::string> point_query_term_strings(
    Strategy strategy, const Hierarchy& h, MinuteOfDay t,
    const std::string& day_prefix = {});

// Query-time linear scan; the correctness oracle and slowest baseline.
// Returns sorted positions into `pois`. Day tags are ignored (time-only).
std::vector<DocHandle> scope_filter(const std::vector<PoiRecord>& pois,
                                    MinuteOfDay t);
std::vector<DocHandle> scope_filter_range(const std::vector<PoiRecord>& pois,
                                          TimeRange q);

// Empty-set conventions: precision is 1.0 when both sets are empty and 0.0
// when only the result is empty; recall mirrors with the roles swapped.
std::pair<double, double> precision_recall(const std::vector<DocHandle>& result,
                                           const std::vector<DocHandle>& truth);

// JSON-lines POI format, one object per line:
//   {"id": "...", "ranges": [["hhmm","hhmm"], ...], "day": "..."}
// "day" is optional. A start after its end denotes a midnight wrap and is
// split into two ranges; ["0000","2400"] denotes 24-hour operation.
std::vector<PoiRecord> read_pois_jsonl(const std::string& path);
std::vector<PoiRecord> read_pois_jsonl(std::istream& in);
void write_pois_jsonl(const std::vector<PoiRecord>& pois, std::ostream& out);

}  // namespace timehash
