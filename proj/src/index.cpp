#include "timehash/index.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace timehash {

namespace {

// Shared hhmm label table for the minute/block baselines.
const std::vector<std::string>& hhmm_table() {
  static const std::vector<std::string> table = [] {
    std::vector<std::string> t;
    t.reserve(kMinutesPerDay);
    for (int m = 0; m < kMinutesPerDay; ++m) t.push_back(format_hhmm(m));
    return t;
  }();
  return table;
}

// Terms for the block baselines: every `granularity`-minute block whose
// intersection with some range is non-empty, labeled by block-start hhmm.
std::vector<std::string> block_terms(const std::vector<TimeRange>& ranges,
                                     int granularity, const std::string& prefix) {
  std::array<bool, kMinutesPerDay> hit{};
  for (const TimeRange& r : ranges) {
    if (r.empty()) continue;
    const int first = r.start / granularity;
    const int last = (r.end - 1) / granularity;
    for (int b = first; b <= last; ++b) hit[static_cast<std::size_t>(b)] = true;
  }
  std::vector<std::string> terms;
  for (int b = 0; b * granularity < kMinutesPerDay; ++b) {
    if (hit[static_cast<std::size_t>(b)]) {
      terms.push_back(prefix + hhmm_table()[static_cast<std::size_t>(b * granularity)]);
    }
  }
  return terms;
}

std::vector<std::string> minute_terms(const std::vector<TimeRange>& ranges,
                                      const std::string& prefix) {
  std::array<bool, kMinutesPerDay> open{};
  for (const TimeRange& r : ranges) {
    for (int t = r.start; t < r.end; ++t) open[static_cast<std::size_t>(t)] = true;
  }
  std::vector<std::string> terms;
  for (int t = 0; t < kMinutesPerDay; ++t) {
    if (open[static_cast<std::size_t>(t)]) {
      terms.push_back(prefix + hhmm_table()[static_cast<std::size_t>(t)]);
    }
  }
  return terms;
}

void check_ranges(const PoiRecord& poi) {
  if (poi.ranges.empty()) {
    throw std::invalid_argument("document \"" + poi.id + "\" has no ranges");
  }
  for (const TimeRange& r : poi.ranges) {
    if (r.start < 0 || r.end > kMinutesPerDay || r.start > r.end) {
      throw std::invalid_argument("document \"" + poi.id + "\" has range [" +
                                  std::to_string(r.start) + ", " +
                                  std::to_string(r.end) + ") outside the day");
    }
  }
}

}  // namespace

Strategy parse_strategy(const std::string& name) {
  if (name == "timehash") return Strategy::timehash;
  if (name == "minute1") return Strategy::minute1;
  if (name == "minute5") return Strategy::minute5;
  if (name == "hour1") return Strategy::hour1;
  throw IndexError(IndexError::Code::UnsupportedStrategy,
                   "unknown strategy \"" + name + "\"");
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::timehash: return "timehash";
    case Strategy::minute1: return "minute1";
    case Strategy::minute5: return "minute5";
    case Strategy::hour1: return "hour1";
  }
  return "?";
}

InvertedIndex::InvertedIndex(Strategy strategy, Hierarchy hierarchy)
    : strategy_(strategy), hierarchy_(std::move(hierarchy)) {}

std::vector<std::string> InvertedIndex::doc_terms(const PoiRecord& poi) const {
  switch (strategy_) {
    case Strategy::timehash:
      return document_terms(poi.ranges, hierarchy_, poi.day_tag);
    case Strategy::minute1:
      return minute_terms(poi.ranges, poi.day_tag);
    case Strategy::minute5:
      return block_terms(poi.ranges, 5, poi.day_tag);
    case Strategy::hour1:
      return block_terms(poi.ranges, 60, poi.day_tag);
  }
  return {};
}

std::size_t InvertedIndex::index_document(const PoiRecord& poi) {
  if (frozen_) throw std::logic_error("index is frozen");
  check_ranges(poi);
  if (id_lookup_.contains(poi.id)) {
    throw IndexError(IndexError::Code::DuplicateDocument,
                     "document \"" + poi.id + "\" is already indexed");
  }
  const DocHandle handle = static_cast<DocHandle>(doc_ids_.size());
  const std::vector<std::string> terms = doc_terms(poi);
  id_lookup_.emplace(poi.id, handle);
  doc_ids_.push_back(poi.id);
  for (const std::string& term : terms) {
    postings_[term].push_back(handle);
  }
  term_total_ += terms.size();
  return terms.size();
}

std::size_t InvertedIndex::index_document(const PoiRecord& poi,
                                          const Hierarchy& h) {
  if (strategy_ == Strategy::timehash && !(h == hierarchy_)) {
    throw IndexError(IndexError::Code::MixedHierarchy,
                     "index uses hierarchy (" + hierarchy_.to_string() +
                         "), document keyed with (" + h.to_string() + ")");
  }
  return index_document(poi);
}

void InvertedIndex::freeze() {
  frozen_ = true;
  for (auto& [term, list] : postings_) list.shrink_to_fit();
}

const std::vector<DocHandle>* InvertedIndex::postings(
    const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? nullptr : &it->second;
}

namespace {

// Sorted union of pairwise-disjoint sorted lists. A point query hits at most
// one block per hierarchy level and a document's cover blocks are disjoint,
// so no document appears in two of the lists and a plain merge suffices.
void merge_disjoint(const std::vector<DocHandle>* const* lists, std::size_t n,
                    std::vector<DocHandle>& out) {
  if (n == 0) return;
  if (n == 1) {
    out = *lists[0];
    return;
  }
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += lists[i]->size();
  out.reserve(total);
  std::array<std::size_t, 8> pos{};
  while (out.size() < total) {
    std::size_t best = n;
    DocHandle best_val = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pos[i] < lists[i]->size()) {
        const DocHandle v = (*lists[i])[pos[i]];
        if (best == n || v < best_val) {
          best = i;
          best_val = v;
        }
      }
    }
    out.push_back(best_val);
    ++pos[best];
  }
}

}  // namespace

QueryResult InvertedIndex::point_query(MinuteOfDay t,
                                       const std::string& day_prefix) const {
  const auto t0 = std::chrono::steady_clock::now();
  QueryResult result;
  std::array<const std::vector<DocHandle>*, 8> hit{};
  std::size_t lists = 0;
  auto probe = [&](const std::string& term) {
    ++result.terms_probed;
    auto it = postings_.find(term);
    if (it != postings_.end() && !it->second.empty()) {
      hit[lists++] = &it->second;
    }
  };
  switch (strategy_) {
    case Strategy::timehash:
      for (const TimehashKey& key : point_query_terms(t, hierarchy_)) {
        probe(day_prefix + key.text);
      }
      break;
    case Strategy::minute1:
      probe(day_prefix + hhmm_table()[static_cast<std::size_t>(t)]);
      break;
    case Strategy::minute5:
      probe(day_prefix + hhmm_table()[static_cast<std::size_t>(t / 5 * 5)]);
      break;
    case Strategy::hour1:
      probe(day_prefix + hhmm_table()[static_cast<std::size_t>(t / 60 * 60)]);
      break;
  }
  merge_disjoint(hit.data(), lists, result.docs);
  result.latency = std::chrono::steady_clock::now() - t0;
  return result;
}

QueryResult InvertedIndex::range_query(TimeRange q,
                                       const std::string& day_prefix) const {
  if (strategy_ != Strategy::timehash) {
    throw IndexError(IndexError::Code::UnsupportedStrategy,
                     "range_query requires the timehash strategy, index uses " +
                         to_string(strategy_));
  }
  const auto t0 = std::chrono::steady_clock::now();
  QueryResult result;
  for (const TimehashKey& key : range_query_terms(q, hierarchy_)) {
    ++result.terms_probed;
    auto it = postings_.find(day_prefix + key.text);
    if (it != postings_.end()) {
      result.docs.insert(result.docs.end(), it->second.begin(), it->second.end());
    }
  }
  std::sort(result.docs.begin(), result.docs.end());
  result.docs.erase(std::unique(result.docs.begin(), result.docs.end()),
                    result.docs.end());
  result.latency = std::chrono::steady_clock::now() - t0;
  return result;
}

std::vector<std::string> point_query_term_strings(Strategy strategy,
                                                  const Hierarchy& h,
                                                  MinuteOfDay t,
                                                  const std::string& day_prefix) {
  std::vector<std::string> terms;
  switch (strategy) {
    case Strategy::timehash:
      for (const TimehashKey& key : point_query_terms(t, h)) {
        terms.push_back(day_prefix + key.text);
      }
      break;
    case Strategy::minute1:
      terms.push_back(day_prefix + hhmm_table()[static_cast<std::size_t>(t)]);
      break;
    case Strategy::minute5:
      terms.push_back(day_prefix +
                      hhmm_table()[static_cast<std::size_t>(t / 5 * 5)]);
      break;
    case Strategy::hour1:
      terms.push_back(day_prefix +
                      hhmm_table()[static_cast<std::size_t>(t / 60 * 60)]);
      break;
  }
  return terms;
}

std::vector<DocHandle> scope_filter(const std::vector<PoiRecord>& pois,
                                    MinuteOfDay t) {
  std::vector<DocHandle> out;
  for (std::size_t i = 0; i < pois.size(); ++i) {
    for (const TimeRange& r : pois[i].ranges) {
      if (r.contains(t)) {
        out.push_back(static_cast<DocHandle>(i));
        break;
      }
    }
  }
  return out;
}

std::vector<DocHandle> scope_filter_range(const std::vector<PoiRecord>& pois,
                                          TimeRange q) {
  std::vector<DocHandle> out;
  if (q.empty()) return out;  // an empty window overlaps nothing
  for (std::size_t i = 0; i < pois.size(); ++i) {
    for (const TimeRange& r : pois[i].ranges) {
      if (r.overlaps(q)) {
        out.push_back(static_cast<DocHandle>(i));
        break;
      }
    }
  }
  return out;
}

std::pair<double, double> precision_recall(const std::vector<DocHandle>& result,
                                           const std::vector<DocHandle>& truth) {
  std::size_t hits = 0;
  auto r = result.begin();
  auto t = truth.begin();
  while (r != result.end() && t != truth.end()) {
    if (*r < *t) {
      ++r;
    } else if (*t < *r) {
      ++t;
    } else {
      ++hits;
      ++r;
      ++t;
    }
  }
  const double precision =
      result.empty() ? (truth.empty() ? 1.0 : 0.0)
                     : static_cast<double>(hits) / static_cast<double>(result.size());
  const double recall =
      truth.empty() ? (result.empty() ? 1.0 : 0.0)
                    : static_cast<double>(hits) / static_cast<double>(truth.size());
  return {precision, recall};
}

namespace {

PoiRecord parse_poi_line(const std::string& line, std::size_t line_no) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": invalid JSON: " + e.what());
  }
  try {
    PoiRecord poi;
    poi.id = doc.at("id").get<std::string>();
    if (poi.id.empty()) throw std::runtime_error("empty id");
    const auto& ranges = doc.at("ranges");
    if (!ranges.is_array() || ranges.empty()) {
      throw std::runtime_error("\"ranges\" must be a non-empty array");
    }
    for (const auto& pair : ranges) {
      if (!pair.is_array() || pair.size() != 2) {
        throw std::runtime_error("range entries must be [\"hhmm\",\"hhmm\"] pairs");
      }
      const MinuteOfDay from = parse_hhmm(pair[0].get<std::string>());
      const MinuteOfDay to = parse_hhmm(pair[1].get<std::string>());
      for (TimeRange piece : split_wrapping(from, to)) {
        poi.ranges.push_back(piece);
      }
    }
    if (doc.contains("day")) poi.day_tag = doc.at("day").get<std::string>();
    return poi;
  } catch (const std::exception& e) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
  }
}

}  // namespace

std::vector<PoiRecord> read_pois_jsonl(std::istream& in) {
  std::vector<PoiRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    out.push_back(parse_poi_line(line, line_no));
  }
  return out;
}

std::vector<PoiRecord> read_pois_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open \"" + path + "\"");
  return read_pois_jsonl(in);
}

void write_pois_jsonl(const std::vector<PoiRecord>& pois, std::ostream& out) {
  // formatted by hand so output is byte-stable
  for (const PoiRecord& poi : pois) {
    out << "{\"id\":\"" << poi.id << "\",\"ranges\":[";
    for (std::size_t i = 0; i < poi.ranges.size(); ++i) {
      if (i) out << ',';
      out << "[\"" << format_hhmm(poi.ranges[i].start) << "\",\""
          << format_hhmm(poi.ranges[i].end) << "\"]";
    }
    out << ']';
    if (!poi.day_tag.empty()) out << ",\"day\":\"" << poi.day_tag << "\"";
    out << "}\n";
  }
}

}  // namespace timehash
