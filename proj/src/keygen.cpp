#include "timehash/keygen.hpp"

#include <algorithm>

namespace timehash {

namespace {

void append_component(std::string& out, int value) {
  out.push_back(static_cast<char>('0' + value / 10));
  out.push_back(static_cast<char>('0' + value % 10));
}

int component_of(MinuteOfDay block_start, int measure) {
  const int aligned = block_start / measure * measure;
  return measure >= 60 ? aligned / 60 : aligned % 60;
}

void check_range(TimeRange r) {
  if (r.start < 0 || r.end > kMinutesPerDay || r.start > r.end) {
    throw std::invalid_argument("time range [" + std::to_string(r.start) + ", " +
                                std::to_string(r.end) + ") is out of domain");
  }
}

}  // namespace

MinuteOfDay parse_hhmm(const std::string& s) {
  if (s.size() != 4 ||
      !std::all_of(s.begin(), s.end(), [](unsigned char c) { return c >= '0' && c <= '9'; })) {
    throw TimeError(TimeError::Code::BadFormat,
                    "time \"" + s + "\" is not a 4-digit hhmm string");
  }
  const int hh = (s[0] - '0') * 10 + (s[1] - '0');
  const int mm = (s[2] - '0') * 10 + (s[3] - '0');
  if (hh > 24 || mm > 59 || (hh == 24 && mm != 0)) {
    throw TimeError(TimeError::Code::OutOfRange,
                    "time \"" + s + "\" is outside 0000..2400");
  }
  return hh * 60 + mm;
}

std::string format_hhmm(MinuteOfDay t) {
  if (t < 0 || t > kMinutesPerDay) {
    throw TimeError(TimeError::Code::OutOfRange,
                    "minute " + std::to_string(t) + " is outside 0..1440");
  }
  std::string out;
  append_component(out, t / 60);
  append_component(out, t % 60);
  return out;
}

TimehashKey encode(MinuteOfDay block_start, int depth, const Hierarchy& h) {
  if (depth < 1 || depth > h.levels()) {
    throw std::invalid_argument("encode: depth " + std::to_string(depth) +
                                " not in 1.." + std::to_string(h.levels()));
  }
  if (block_start < 0 || block_start >= kMinutesPerDay ||
      block_start % h.measure(depth - 1) != 0) {
    throw TimeError(TimeError::Code::Misaligned,
                    "block start " + std::to_string(block_start) +
                        " is not aligned to the " +
                        std::to_string(h.measure(depth - 1)) + "-minute grid");
  }
  TimehashKey key;
  key.depth = depth;
  key.text.reserve(2 * static_cast<std::size_t>(depth));
  for (int i = 0; i < depth; ++i) {
    append_component(key.text, component_of(block_start, h.measure(i)));
  }
  return key;
}

MinuteOfDay decode_key(const std::string& text, const Hierarchy& h) {
  if (text.empty() || text.size() % 2 != 0 ||
      text.size() > 2 * static_cast<std::size_t>(h.levels()) ||
      !std::all_of(text.begin(), text.end(),
                   [](unsigned char c) { return c >= '0' && c <= '9'; })) {
    throw TimeError(TimeError::Code::BadFormat,
                    "key \"" + text + "\" is not a valid composite for this hierarchy");
  }
  const int depth = static_cast<int>(text.size() / 2);
  int start = 0;
  for (int i = 0; i < depth; ++i) {
    const int comp = (text[2 * i] - '0') * 10 + (text[2 * i + 1] - '0');
    const int m = h.measure(i);
    int candidate;
    if (m >= 60) {
      if (comp > 23) {
        throw TimeError(TimeError::Code::BadFormat,
                        "key \"" + text + "\": hour component " +
                            std::to_string(comp) + " exceeds 23");
      }
      // first m-aligned block starting within the component's hour
      candidate = (comp * 60 + m - 1) / m * m;
      if (candidate / 60 != comp) candidate = -1;
    } else {
      // minute-of-hour; a sub-hour parent block may cross an hour boundary,
      // in which case the component refers to the next hour's occurrence
      candidate = start / 60 * 60 + comp;
      if (candidate < start) candidate += 60;
    }
    const bool nests = candidate >= 0 && candidate % m == 0 &&
                       candidate >= start &&
                       (i == 0 || candidate + m <= start + h.measure(i - 1));
    if (!nests) {
      throw TimeError(TimeError::Code::Misaligned,
                      "key \"" + text + "\": component " + std::to_string(comp) +
                          " at level " + std::to_string(i + 1) +
                          " does not nest in its parent block");
    }
    start = candidate;
  }
  return start;
}

std::vector<TimehashKey> index_terms(TimeRange r, const Hierarchy& h) {
  check_range(r);
  std::vector<TimehashKey> keys;
  greedy_cover(r.start, r.end, h, [&](MinuteOfDay block, int depth) {
    keys.push_back(encode(block, depth, h));
  });
  return keys;
}

std::size_t index_term_count(TimeRange r, const Hierarchy& h) {
  check_range(r);
  std::size_t n = 0;
  greedy_cover(r.start, r.end, h, [&](MinuteOfDay, int) { ++n; });
  return n;
}

std::vector<TimehashKey> point_query_terms(MinuteOfDay t, const Hierarchy& h) {
  if (t < 0 || t >= kMinutesPerDay) {
    throw std::invalid_argument("query minute " + std::to_string(t) +
                                " is outside 0..1439");
  }
  std::vector<TimehashKey> keys;
  keys.reserve(static_cast<std::size_t>(h.levels()));
  for (int i = 0; i < h.levels(); ++i) {
    keys.push_back(encode(t / h.measure(i) * h.measure(i), i + 1, h));
  }
  return keys;
}

std::vector<TimehashKey> range_query_terms(TimeRange q, const Hierarchy& h) {
  check_range(q);
  std::vector<TimehashKey> keys;
  if (q.empty()) return keys;
  for (int i = 0; i < h.levels(); ++i) {
    const int m = h.measure(i);
    const int first = q.start / m;
    const int last = (q.end - 1) / m;
    for (int b = first; b <= last; ++b) {
      keys.push_back(encode(b * m, i + 1, h));
    }
  }
  return keys;
}

std::vector<TimeRange> split_wrapping(MinuteOfDay start, MinuteOfDay end,
                                      bool all_day) {
  if (start < 0 || start > kMinutesPerDay || end < 0 || end > kMinutesPerDay) {
    throw std::invalid_argument("split_wrapping: endpoints outside 0..1440");
  }
  if (all_day) return {TimeRange{0, kMinutesPerDay}};
  if (start <= end) return {TimeRange{start, end}};
  std::vector<TimeRange> out;
  if (start < kMinutesPerDay) out.push_back(TimeRange{start, kMinutesPerDay});
  if (end > 0) out.push_back(TimeRange{0, end});
  return out;
}

std::vector<std::string> document_terms(const std::vector<TimeRange>& ranges,
                                        const Hierarchy& h,
                                        const std::string& prefix) {
  std::vector<std::string> terms;
  for (const TimeRange& r : ranges) {
    greedy_cover(r.start, r.end, h, [&](MinuteOfDay block, int depth) {
      terms.push_back(prefix + encode(block, depth, h).text);
    });
  }
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  return terms;
}

}  // namespace timehash
