#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace timehash {

inline constexpr int kMinutesPerDay = 1440;
inline constexpr int kMaxLevels = 6;

class HierarchyError : public std::runtime_error {
 public:
  enum class Code {
    NotDescending,
    NotDivisible,
    CoarsestNotDayDivisor,
    TooManyLevels,
  };

  HierarchyError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

// Ordered list of block granularities in minutes, coarsest first.
// Validated on construction; immutable afterwards, safe to share across
// threads. The default hierarchy is (240, 60, 15, 5, 1).
class Hierarchy {
 public:
  Hierarchy();
  explicit Hierarchy(const std::vector<int>& measures);

  // Parses a comma-separated descending minute list, e.g. "240,60,15,5,1".
  static Hierarchy parse(const std::string& csv);

  int levels() const { return static_cast<int>(measures_.size()); }
  const std::vector<int>& measures() const { return measures_; }
  int measure(int level) const { return measures_[level]; }  // 0-based
  int coarsest() const { return measures_.front(); }
  int finest() const { return measures_.back(); }

  std::string to_string() const;  // csv form, matches parse()

  bool operator==(const Hierarchy& other) const {
    return measures_ == other.measures_;
  }

 private:
  std::vector<int> measures_;
};

// B = 2 * sum over adjacent level pairs of (coarser/finer - 1). The raw-list
// overload evaluates the formula without hierarchy validation so degenerate
// lists (e.g. a repeated finest level) can be probed.
int boundary_constant(const std::vector<int>& measures);
int boundary_constant(const Hierarchy& h);

// Upper bound on keys generated for any single range of length <= day_length:
// floor(day_length / coarsest) + 1 + B.
int max_key_bound(const Hierarchy& h, int day_length = kMinutesPerDay);

}  // namespace timehash
