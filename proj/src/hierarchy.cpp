#include "timehash/hierarchy.hpp"

#include <charconv>
#include <sstream>

namespace timehash {

namespace {

std::vector<int> validate(const std::vector<int>& measures) {
  if (measures.empty()) {
    throw std::invalid_argument("hierarchy: measure list must be non-empty");
  }
  for (int m : measures) {
    if (m < 1) {
      throw std::invalid_argument("hierarchy: measures must be positive, got " +
                                  std::to_string(m));
    }
  }
  if (measures.size() > static_cast<std::size_t>(kMaxLevels)) {
    throw HierarchyError(HierarchyError::Code::TooManyLevels,
                         "hierarchy: " + std::to_string(measures.size()) +
                             " levels exceeds the maximum of " +
                             std::to_string(kMaxLevels));
  }
  if (kMinutesPerDay % measures.front() != 0) {
    throw HierarchyError(HierarchyError::Code::CoarsestNotDayDivisor,
                         "hierarchy: coarsest measure " +
                             std::to_string(measures.front()) +
                             " does not divide " + std::to_string(kMinutesPerDay));
  }
  for (std::size_t i = 0; i + 1 < measures.size(); ++i) {
    if (measures[i] <= measures[i + 1]) {
      throw HierarchyError(HierarchyError::Code::NotDescending,
                           "hierarchy: measures not strictly descending at (" +
                               std::to_string(measures[i]) + ", " +
                               std::to_string(measures[i + 1]) + ")");
    }
    if (measures[i] % measures[i + 1] != 0) {
      throw HierarchyError(HierarchyError::Code::NotDivisible,
                           "hierarchy: " + std::to_string(measures[i + 1]) +
                               " does not divide " + std::to_string(measures[i]));
    }
  }
  return measures;
}

}  // namespace

Hierarchy::Hierarchy() : measures_{240, 60, 15, 5, 1} {}

Hierarchy::Hierarchy(const std::vector<int>& measures)
    : measures_(validate(measures)) {}

Hierarchy Hierarchy::parse(const std::string& csv) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    const char* first = csv.data() + pos;
    const char* last = csv.data() + comma;
    int value = 0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
      throw std::invalid_argument("hierarchy: bad measure list \"" + csv + "\"");
    }
    out.push_back(value);
    pos = comma + 1;
    if (comma == csv.size()) break;
  }
  return Hierarchy(out);
}

std::string Hierarchy::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < measures_.size(); ++i) {
    if (i) os << ',';
    os << measures_[i];
  }
  return os.str();
}

int boundary_constant(const std::vector<int>& measures) {
  int b = 0;
  for (std::size_t i = 1; i < measures.size(); ++i) {
    b += measures[i - 1] / measures[i] - 1;
  }
  return 2 * b;
}

int boundary_constant(const Hierarchy& h) {
  return boundary_constant(h.measures());
}

int max_key_bound(const Hierarchy& h, int day_length) {
  return day_length / h.coarsest() + 1 + boundary_constant(h);
}

}  // namespace timehash
