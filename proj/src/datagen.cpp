#include "timehash/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace timehash {

namespace {

// Draw protocol is pinned to mt19937_64 plus the helpers below so generated
// corpora stay byte-stable across standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  int uniform_int(int n) {  // [0, n)
    return static_cast<int>(eng_() % static_cast<std::uint64_t>(n));
  }

  double gauss(double mean, double sd) {  // Box-Muller, two draws per call
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 eng_;
};

template <std::size_t N>
int draw_categorical(Rng& rng, const std::array<double, N>& weights, double sum) {
  const double x = rng.uniform() * sum;
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    acc += weights[i];
    if (x < acc) return static_cast<int>(i);
  }
  return static_cast<int>(N) - 1;
}

constexpr std::array<int, 2> kOther5Offsets{15, 45};
constexpr std::array<int, 5> kGapChoices{60, 90, 120, 150, 180};
constexpr std::array<double, 5> kGapWeights{0.40, 0.25, 0.20, 0.10, 0.05};

int draw_minute_offset(Rng& rng, const std::array<double, 4>& w) {
  switch (draw_categorical(rng, w, w[0] + w[1] + w[2] + w[3])) {
    case 0: return 0;
    case 1: return 30;
    case 2: return kOther5Offsets[static_cast<std::size_t>(rng.uniform_int(2))];
    default: {
      int m = 1 + rng.uniform_int(59);
      while (m % 5 == 0) m = 1 + rng.uniform_int(59);
      return m;
    }
  }
}

// Nearest minute with the given minute-of-hour offset (ties to the earlier).
int snap_to_offset(int t, int offset) {
  const int base = t / 60 * 60 + offset;
  int best = base - 60;
  for (int cand : {base, base + 60}) {
    if (std::abs(cand - t) < std::abs(best - t)) best = cand;
  }
  return best;
}

void validate(const DistributionConfig& c) {
  double minute_sum = 0.0;
  for (double w : c.start_minute_weights) {
    if (!(w >= 0.0)) {
      throw DatagenError(DatagenError::Code::InvalidConfig,
                         "start_minute_weights must be non-negative");
    }
    minute_sum += w;
  }
  if (std::abs(minute_sum - 1.0) > 1e-9) {
    throw DatagenError(DatagenError::Code::InvalidConfig,
                       "start_minute_weights must sum to 1");
  }
  double hour_sum = 0.0;
  for (double w : c.start_hour_weights) {
    if (!(w >= 0.0)) {
      throw DatagenError(DatagenError::Code::InvalidConfig,
                         "start_hour_weights must be non-negative");
    }
    hour_sum += w;
  }
  if (std::abs(hour_sum - 1.0) > 1e-9) {
    throw DatagenError(DatagenError::Code::InvalidConfig,
                       "start_hour_weights must sum to 1");
  }
  for (double f : {c.break_fraction, c.all_day_fraction}) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw DatagenError(DatagenError::Code::InvalidConfig,
                         "fractions must lie in [0, 1]");
    }
  }
  if (!(c.duration_sd >= 0.0) || !(c.duration_mean > 0.0) || c.duration_min < 1) {
    throw DatagenError(DatagenError::Code::InvalidConfig,
                       "duration model parameters out of domain");
  }
}

std::vector<TimeRange> sample_ranges(Rng& rng, const DistributionConfig& c,
                                     double hour_sum) {
  if (rng.uniform() < c.all_day_fraction) {
    return {TimeRange{0, kMinutesPerDay}};
  }
  const bool has_break = rng.uniform() < c.break_fraction;
  const int hour = draw_categorical(rng, c.start_hour_weights, hour_sum);
  const int start_offset = draw_minute_offset(rng, c.start_minute_weights);
  const int start = 60 * hour + start_offset;

  int duration = static_cast<int>(
      std::lround(rng.gauss(c.duration_mean, c.duration_sd)));
  duration = std::clamp(duration, c.duration_min, kMinutesPerDay - 1);

  const int end_offset = draw_minute_offset(rng, c.start_minute_weights);
  int end = snap_to_offset(start + duration, end_offset);
  if (end <= start) end += 60;
  if (end - start >= kMinutesPerDay) end -= 60;  // snap overshoot past a full day
  duration = end - start;

  if (!has_break) {
    if (end <= kMinutesPerDay) return {TimeRange{start, end}};
    const int tail = end - kMinutesPerDay;  // < start, since duration < 1440
    if (tail <= 0) return {TimeRange{start, kMinutesPerDay}};
    return {TimeRange{start, kMinutesPerDay}, TimeRange{0, tail}};
  }

  // split schedule: two ranges totaling `duration` around a midday gap
  const double u = 0.35 + 0.20 * rng.uniform();
  const int mid_offset = rng.uniform() < 0.85 ? 0 : 30;
  int first_len =
      snap_to_offset(start + static_cast<int>(std::lround(duration * u)),
                     mid_offset) - start;
  first_len = std::max(30, std::min(first_len, duration - 30));
  int second_len = duration - first_len;
  const int gap = kGapChoices[static_cast<std::size_t>(
      draw_categorical(rng, kGapWeights, 1.0))];
  if (second_len < 15) return {TimeRange{start, start + duration}};

  int s = start;
  const int total = first_len + gap + second_len;
  if (s + total > kMinutesPerDay) {
    // shift back to fit, preserving the start's minute-of-hour alignment
    s = std::max(start % 60,
                 (kMinutesPerDay - total) / 60 * 60 + start % 60);
    if (s + total > kMinutesPerDay) s = std::max(0, s - 60);
    if (s + total > kMinutesPerDay) {
      second_len = kMinutesPerDay - s - first_len - gap;
      if (second_len < 30) return {TimeRange{s, s + first_len}};
    }
  }
  return {TimeRange{s, s + first_len},
          TimeRange{s + first_len + gap, s + first_len + gap + second_len}};
}

std::string padded_id(std::size_t i) {
  std::string id = std::to_string(i);
  return std::string(id.size() < 8 ? 8 - id.size() : 0, '0') + id;
}

double mean_minute1_terms(const DistributionConfig& config) {
  // open minutes per document equal minute1 terms (generated ranges are
  // disjoint), so the probe skips term materialization
  Rng rng(config.seed);
  double hour_sum = 0.0;
  for (double w : config.start_hour_weights) hour_sum += w;
  long long total = 0;
  for (std::size_t i = 0; i < config.n; ++i) {
    for (const TimeRange& r : sample_ranges(rng, config, hour_sum)) {
      total += r.length();
    }
  }
  return config.n == 0 ? 0.0
                       : static_cast<double>(total) / static_cast<double>(config.n);
}

}  // namespace

std::vector<PoiRecord> generate(const DistributionConfig& config) {
  validate(config);
  Rng rng(config.seed);
  double hour_sum = 0.0;
  for (double w : config.start_hour_weights) hour_sum += w;
  std::vector<PoiRecord> pois;
  pois.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    PoiRecord poi;
    poi.id = padded_id(i);
    poi.ranges = sample_ranges(rng, config, hour_sum);
    pois.push_back(std::move(poi));
  }
  return pois;
}

DistributionReport distribution_report(const std::vector<PoiRecord>& pois) {
  if (pois.empty()) {
    throw std::invalid_argument("distribution_report: no documents");
  }
  DistributionReport rep;
  rep.n = pois.size();
  const Hierarchy h;
  std::size_t timed = 0;     // non-24h documents, for alignment fractions
  std::size_t breaks = 0;
  long long open_total = 0;
  long long th_total = 0;
  for (const PoiRecord& poi : pois) {
    long long open = 0;
    for (const TimeRange& r : poi.ranges) open += r.length();
    open_total += open;
    th_total += static_cast<long long>(document_terms(poi.ranges, h).size());
    const bool all_day =
        poi.ranges.size() == 1 && poi.ranges[0] == TimeRange{0, kMinutesPerDay};
    if (all_day) continue;
    ++timed;
    const int off = poi.ranges[0].start % 60;
    if (off == 0) {
      ++rep.frac_00;
    } else if (off == 30) {
      ++rep.frac_30;
    } else if (off % 5 == 0) {
      ++rep.frac_other5;
    } else {
      ++rep.frac_nonaligned;
    }
    // midnight-wrapped schedules are a single shift, not a break
    if (poi.ranges.size() >= 2 && poi.ranges[0].end != kMinutesPerDay) ++breaks;
  }
  const double nd = static_cast<double>(pois.size());
  if (timed > 0) {
    rep.frac_00 /= static_cast<double>(timed);
    rep.frac_30 /= static_cast<double>(timed);
    rep.frac_other5 /= static_cast<double>(timed);
    rep.frac_nonaligned /= static_cast<double>(timed);
  }
  rep.mean_duration = static_cast<double>(open_total) / nd;
  rep.break_fraction = static_cast<double>(breaks) / nd;
  rep.minute1_terms_per_doc = rep.mean_duration;
  rep.timehash_terms_per_doc = static_cast<double>(th_total) / nd;
  return rep;
}

DistributionConfig calibrate(double target_minute1_terms,
                             DistributionConfig base) {
  if (!(target_minute1_terms > 0.0)) {
    throw DatagenError(DatagenError::Code::Unreachable,
                       "calibration target must be positive");
  }
  validate(base);
  DistributionConfig probe = base;
  probe.n = std::min<std::size_t>(std::max<std::size_t>(base.n, 1), 50000);

  const double tolerance = 0.005 * target_minute1_terms;
  if (std::abs(mean_minute1_terms(probe) - target_minute1_terms) <= tolerance) {
    return base;  // already on target
  }

  double lo = 60.0, hi = 1400.0;
  auto eval = [&](double mean) {
    probe.duration_mean = mean;
    return mean_minute1_terms(probe);
  };
  double f_lo = eval(lo), f_hi = eval(hi);
  if ((f_lo - target_minute1_terms) * (f_hi - target_minute1_terms) > 0.0) {
    std::ostringstream os;
    os << "target " << target_minute1_terms
       << " terms/doc is outside the reachable range [" << f_lo << ", " << f_hi
       << "]";
    throw DatagenError(DatagenError::Code::Unreachable, os.str());
  }
  for (int iter = 0; iter < 48 && hi - lo > 0.05; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = eval(mid);
    if (std::abs(f_mid - target_minute1_terms) <= tolerance) break;
    if ((f_mid - target_minute1_terms) * (f_lo - target_minute1_terms) > 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  base.duration_mean = probe.duration_mean;
  return base;
}

DistributionConfig load_config(const std::string& path,
                               DistributionConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw DatagenError(DatagenError::Code::InvalidConfig,
                       "cannot open config \"" + path + "\"");
  }
  std::string line;
  std::size_t line_no = 0;
  auto parse_list = [&](const std::string& value, double* out, std::size_t n) {
    std::istringstream vs(value);
    std::string item;
    std::size_t i = 0;
    while (std::getline(vs, item, ',')) {
      if (i >= n) break;
      out[i++] = std::stod(item);
    }
    if (i != n) {
      throw DatagenError(DatagenError::Code::InvalidConfig,
                         "line " + std::to_string(line_no) + ": expected " +
                             std::to_string(n) + " comma-separated values");
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::size_t eq = line.find('=');
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (eq == std::string::npos) {
      throw DatagenError(DatagenError::Code::InvalidConfig,
                         "line " + std::to_string(line_no) +
                             ": expected key = value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "seed") {
        base.seed = std::stoull(value);
      } else if (key == "n") {
        base.n = std::stoull(value);
      } else if (key == "start_minute_weights") {
        parse_list(value, base.start_minute_weights.data(), 4);
      } else if (key == "start_hour_weights") {
        parse_list(value, base.start_hour_weights.data(), 24);
      } else if (key == "duration_mean") {
        base.duration_mean = std::stod(value);
      } else if (key == "duration_sd") {
        base.duration_sd = std::stod(value);
      } else if (key == "duration_min") {
        base.duration_min = std::stoi(value);
      } else if (key == "break_fraction") {
        base.break_fraction = std::stod(value);
      } else if (key == "all_day_fraction") {
        base.all_day_fraction = std::stod(value);
      } else {
        throw DatagenError(DatagenError::Code::InvalidConfig,
                           "line " + std::to_string(line_no) +
                               ": unknown key \"" + key + "\"");
      }
    } catch (const DatagenError&) {
      throw;
    } catch (const std::exception&) {
      throw DatagenError(DatagenError::Code::InvalidConfig,
                         "line " + std::to_string(line_no) +
                             ": bad value for \"" + key + "\"");
    }
  }
  validate(base);
  return base;
}

}  // namespace timehash
