#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "timehash/hierarchy.hpp"

namespace timehash {

class TimeError : public std::runtime_error {
 public:
  enum class Code { BadFormat, OutOfRange, Misaligned };

  TimeError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

// Minutes since midnight; 1440 is permitted only as an exclusive range end.
using MinuteOfDay = int;

// Half-open interval [start, end); empty when start == end.
struct TimeRange {
  MinuteOfDay start = 0;
  MinuteOfDay end = 0;

  int length() const { return end - start; }
  bool empty() const { return start == end; }
  bool contains(MinuteOfDay t) const { return t >= start && t < end; }
  bool overlaps(const TimeRange& other) const {
    return start < other.end && other.start < end;
  }
  bool operator==(const TimeRange& other) const = default;
};

// Composite block key: two digits per level used, coarsest to finest. The
// component is the block-start hour for measures >= 60 minutes and the
// block-start minute-of-hour for sub-hour measures.
struct TimehashKey {
  std::string text;
  int depth = 0;  // number of two-digit components

  bool operator==(const TimehashKey& other) const = default;
  auto operator<=>(const TimehashKey& other) const = default;
};

// "1140" -> 700. "2400" -> 1440 is accepted (usable as a range end only).
MinuteOfDay parse_hhmm(const std::string& s);
std::string format_hhmm(MinuteOfDay t);  // inverse, 1440 -> "2400"

TimehashKey encode(MinuteOfDay block_start, int depth, const Hierarchy& h);

// Inverse of encode: returns the block start encoded by `text`. Throws
// BadFormat on malformed component strings and Misaligned when components
// do not nest.
MinuteOfDay decode_key(const std::string& text, const Hierarchy& h);

// Greedy cover of [start, end): repeatedly emit the largest measure whose
// grid-aligned block fits inside the remainder, then advance past it. When
// the finest measure exceeds one minute the range is first snapped outward
// to the finest grid (covered blocks form a superset of the range). Calls
// fn(block_start, depth) for each emitted block in ascending block order.
template <class Fn>
inline void greedy_cover(MinuteOfDay start, MinuteOfDay end, const Hierarchy& h,
                         Fn&& fn) {
  const std::vector<int>& m = h.measures();
  const int k = static_cast<int>(m.size());
  const int finest = m[k - 1];
  int cur = start;
  int stop = end;
  if (finest > 1) {
    cur = cur / finest * finest;
    stop = (stop + finest - 1) / finest * finest;
  }
  while (cur < stop) {
    for (int i = 0; i < k; ++i) {
      const int mi = m[i];
      if (cur % mi == 0 && cur + mi <= stop) {
        fn(cur, i + 1);
        cur += mi;
        break;
      }
    }
  }
}

// Index-side decomposition of a range, ascending block order. Empty ranges
// produce no keys.
std::vector<TimehashKey> index_terms(TimeRange r, const Hierarchy& h);

// |index_terms(r, h)| without materializing key strings.
std::size_t index_term_count(TimeRange r, const Hierarchy& h);

// One key per hierarchy level, coarsest first: the level's block containing t.
std::vector<TimehashKey> point_query_terms(MinuteOfDay t, const Hierarchy& h);

// Every block at every level whose intersection with q is non-empty,
// level-major then ascending. A document's index terms intersect this set
// iff one of its ranges overlaps q.
std::vector<TimehashKey> range_query_terms(TimeRange q, const Hierarchy& h);

// start < end: one range. start > end: midnight wrap, two ranges (empty
// pieces dropped). all_day or the pair (0, 1440): the full day.
std::vector<TimeRange> split_wrapping(MinuteOfDay start, MinuteOfDay end,
                                      bool all_day = false);

// Union of index_terms over all ranges as sorted unique key strings; prefix,
// when non-empty, is prepended verbatim to every key (an opaque extra
// coarsest level, e.g. a day tag).
std::vector<std::string> document_terms(const std::vector<TimeRange>& ranges,
                                        const Hierarchy& h,
                                        const std::string& prefix = {});

}  // namespace timehash
