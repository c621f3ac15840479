#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "timehash/index.hpp"

namespace timehash {

class DatagenError : public std::runtime_error {
 public:
  enum class Code { InvalidConfig, Unreachable };

  DatagenError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

// Morning-peaked opening-hour categorical (0..23), normalized to sum to 1.
inline std::array<double, 24> default_start_hour_weights() {
  std::array<double, 24> w{1, 1, 1, 1, 2,  4,  10, 14, 16, 14, 12, 10,
                           8, 6, 5, 4, 4,  3,  2,  2,  1,  1,  1,  1};
  double sum = 0.0;
  for (double v : w) sum += v;
  for (double& v : w) v /= sum;
  return w;
}

// Synthetic POI distribution. Defaults reproduce production-like clustering:
// boundaries overwhelmingly at :00/:30 with a small :15/:45 residual,
// morning-peaked opening hours, ~9% split schedules, a small 24-hour share,
// and a duration model calibrated so that 1-minute indexing averages ~609.7
// terms per document.
struct DistributionConfig {
  std::uint64_t seed = 42;
  std::size_t n = 100000;

  // categorical over {:00, :30, other 5-minute multiple, non-aligned};
  // the "other 5-minute multiple" class draws from {:15, :45}, keeping the
  // reachable key space small (sub-5-minute boundary keys never appear)
  std::array<double, 4> start_minute_weights{0.837, 0.155, 0.008, 0.0};

  // categorical over opening hour 0..23
  std::array<double, 24> start_hour_weights = default_start_hour_weights();

  double duration_mean = 606.0;  // minutes of total open time, pre-snap
  double duration_sd = 150.0;
  int duration_min = 30;

  double break_fraction = 0.091;    // two disjoint ranges with a midday gap
  double all_day_fraction = 0.004;  // exactly [0000, 2400)
};

std::vector<PoiRecord> generate(const DistributionConfig& config);

struct DistributionReport {
  std::size_t n = 0;
  double frac_00 = 0;   // share of opening times at :00 (non-24h documents)
  double frac_30 = 0;
  double frac_other5 = 0;
  double frac_nonaligned = 0;
  double mean_duration = 0;  // open minutes per document
  double break_fraction = 0;
  double minute1_terms_per_doc = 0;
  double timehash_terms_per_doc = 0;  // default hierarchy
};

DistributionReport distribution_report(const std::vector<PoiRecord>& pois);

// Deterministic bisection on duration_mean until the generated mean
// 1-minute terms/doc is within 0.5% of target (probed at up to 50K docs).
// Throws Unreachable when the target cannot be bracketed.
DistributionConfig calibrate(double target_minute1_terms,
                             DistributionConfig base);

// Flat "key = value" config file; unknown keys raise InvalidConfig.
// Recognized keys mirror DistributionConfig (weights as comma lists).
DistributionConfig load_config(const std::string& path, DistributionConfig base);

}  // namespace timehash
