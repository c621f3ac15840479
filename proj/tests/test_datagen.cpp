#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "timehash/datagen.hpp"

using namespace timehash;

namespace {

bool same_corpus(const std::vector<PoiRecord>& a,
                 const std::vector<PoiRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].id != b[i].id || a[i].ranges != b[i].ranges ||
        a[i].day_tag != b[i].day_tag) {
      return false;
    }
  }
  return true;
}

DatagenError::Code code_of(const DistributionConfig& config) {
  try {
    generate(config);
  } catch (const DatagenError& e) {
    return e.code();
  }
  throw std::logic_error("expected DatagenError");
}

// small config used where full-size corpora would just slow the suite down
DistributionConfig small_config() {
  DistributionConfig c;
  c.n = 20000;
  return c;
}

}  // namespace

TEST_CASE("generation is a pure function of the config") {
  DistributionConfig c;
  c.n = 5000;
  CHECK(same_corpus(generate(c), generate(c)));

  DistributionConfig other = c;
  other.seed = 43;
  CHECK_FALSE(same_corpus(generate(c), generate(other)));

  c.n = 0;
  CHECK(generate(c).empty());
}

TEST_CASE("config validation rejects out-of-domain parameters") {
  DistributionConfig base;
  base.n = 1;

  auto broken = base;
  broken.start_minute_weights[1] = -0.1;
  CHECK(code_of(broken) == DatagenError::Code::InvalidConfig);

  broken = base;
  broken.start_minute_weights = {0.5, 0.5, 0.5, 0.0};  // sums to 1.5
  CHECK(code_of(broken) == DatagenError::Code::InvalidConfig);

  broken = base;
  broken.start_hour_weights[9] += 0.25;  // no longer sums to 1
  CHECK(code_of(broken) == DatagenError::Code::InvalidConfig);

  broken = base;
  broken.break_fraction = 1.5;
  CHECK(code_of(broken) == DatagenError::Code::InvalidConfig);

  broken = base;
  broken.all_day_fraction = -0.2;
  CHECK(code_of(broken) == DatagenError::Code::InvalidConfig);

  broken = base;
  broken.duration_mean = 0.0;
  CHECK(code_of(broken) == DatagenError::Code::InvalidConfig);

  broken = base;
  broken.duration_sd = -1.0;
  CHECK(code_of(broken) == DatagenError::Code::InvalidConfig);

  broken = base;
  broken.duration_min = 0;
  CHECK(code_of(broken) == DatagenError::Code::InvalidConfig);
}

TEST_CASE("default distribution lands on its documented shape") {
  const std::vector<PoiRecord> pois = generate(small_config());
  const DistributionReport rep = distribution_report(pois);

  CHECK(rep.n == 20000);
  CHECK(rep.frac_00 == doctest::Approx(0.837).epsilon(0.025));
  CHECK(rep.frac_30 == doctest::Approx(0.155).epsilon(0.12));
  CHECK(rep.frac_nonaligned == 0.0);  // zero weight in the default config
  CHECK(rep.break_fraction == doctest::Approx(0.091).epsilon(0.15));
  CHECK(rep.mean_duration == doctest::Approx(609.0).epsilon(0.025));
  CHECK(rep.minute1_terms_per_doc == rep.mean_duration);
  CHECK(rep.timehash_terms_per_doc > 4.5);
  CHECK(rep.timehash_terms_per_doc < 7.0);

  CHECK_THROWS_AS(distribution_report({}), std::invalid_argument);
}

TEST_CASE("generated ranges satisfy the structural invariants") {
  const std::vector<PoiRecord> pois = generate(small_config());
  std::size_t all_day = 0;
  for (const PoiRecord& poi : pois) {
    REQUIRE(!poi.ranges.empty());
    REQUIRE(poi.ranges.size() <= 2);
    for (const TimeRange& r : poi.ranges) {
      CHECK(r.start >= 0);
      CHECK(r.start < r.end);
      CHECK(r.end <= kMinutesPerDay);
      // default boundary classes are {:00, :15, :30, :45}, which keeps the
      // reachable key vocabulary small
      CHECK(r.start % 15 == 0);
      CHECK(r.end % 15 == 0);
    }
    if (poi.ranges.size() == 2) {
      const TimeRange& a = poi.ranges[0];
      const TimeRange& b = poi.ranges[1];
      if (a.end == kMinutesPerDay && b.start == 0) {
        CHECK(b.end < a.start);  // midnight wrap leaves a closed stretch
      } else {
        CHECK(b.start - a.end >= 60);  // split schedules get a real gap
      }
    }
    if (poi.ranges.size() == 1 && poi.ranges[0] == TimeRange{0, kMinutesPerDay}) {
      ++all_day;
    }
  }
  // 0.4% of 20000, with slack
  CHECK(all_day > 30);
  CHECK(all_day < 150);
}

TEST_CASE("calibration returns on-target configs unchanged") {
  DistributionConfig base = small_config();
  const double current =
      distribution_report(generate(base)).minute1_terms_per_doc;
  const DistributionConfig same = calibrate(current, base);
  CHECK(same.duration_mean == base.duration_mean);
}

TEST_CASE("calibration converges on a reachable target") {
  DistributionConfig base = small_config();
  const DistributionConfig tuned = calibrate(500.0, base);
  CHECK(tuned.duration_mean != base.duration_mean);
  const DistributionReport rep = distribution_report(generate(tuned));
  CHECK(rep.minute1_terms_per_doc == doctest::Approx(500.0).epsilon(0.01));
}

TEST_CASE("calibration refuses unreachable targets") {
  DistributionConfig base;
  base.n = 10000;
  for (double target : {-5.0, 0.0, 10.0, 1440.0}) {
    try {
      calibrate(target, base);
      FAIL("expected DatagenError for target ", target);
    } catch (const DatagenError& e) {
      CHECK(e.code() == DatagenError::Code::Unreachable);
    }
  }
}

TEST_CASE("config files override defaults and reject junk") {
  const std::string path = "datagen_test_config.txt";
  {
    std::ofstream out(path);
    out << "# synthetic corpus tuning\n"
        << "seed = 7\n"
        << "n = 1234\n"
        << "duration_mean = 480.5  # minutes\n"
        << "duration_min = 45\n"
        << "break_fraction = 0.2\n"
        << "start_minute_weights = 0.9, 0.1, 0, 0\n"
        << "\n";
  }
  const DistributionConfig loaded = load_config(path, DistributionConfig{});
  CHECK(loaded.seed == 7);
  CHECK(loaded.n == 1234);
  CHECK(loaded.duration_mean == 480.5);
  CHECK(loaded.duration_min == 45);
  CHECK(loaded.break_fraction == 0.2);
  CHECK(loaded.start_minute_weights[0] == 0.9);
  CHECK(loaded.start_minute_weights[3] == 0.0);
  // untouched keys keep their defaults
  CHECK(loaded.duration_sd == DistributionConfig{}.duration_sd);

  auto error_of = [&](const std::string& text) {
    std::ofstream out(path);
    out << text;
    out.close();
    try {
      load_config(path, DistributionConfig{});
    } catch (const DatagenError& e) {
      CHECK(e.code() == DatagenError::Code::InvalidConfig);
      return std::string(e.what());
    }
    FAIL("expected DatagenError");
    return std::string();
  };
  CHECK(error_of("seed = 1\nburst_mode = on\n").find("line 2") !=
        std::string::npos);
  CHECK(error_of("duration_mean = fast\n").find("duration_mean") !=
        std::string::npos);
  CHECK(error_of("seed\n").find("key = value") != std::string::npos);
  CHECK(error_of("start_minute_weights = 1, 0, 0\n").find("4") !=
        std::string::npos);
  CHECK(error_of("break_fraction = 1.5\n").find("[0, 1]") !=
        std::string::npos);

  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config(path, DistributionConfig{}), DatagenError);
}
