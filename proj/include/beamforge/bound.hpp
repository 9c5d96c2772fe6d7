#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "beamforge/instance.hpp"
#include "beamforge/patterns.hpp"

namespace beamforge {

// Waste per produced bar, kept as an exact fraction of centimeters.
struct WasteRatio {
  std::int64_t waste_cm = 0;
  std::int64_t bars = 1;

  double meters() const { return static_cast<double>(waste_cm) / (100.0 * bars); }
  friend bool operator<(const WasteRatio& a, const WasteRatio& b) {
    return a.waste_cm * b.bars < b.waste_cm * a.bars;
  }
  friend bool operator==(const WasteRatio& a, const WasteRatio& b) {
    return a.waste_cm * b.bars == b.waste_cm * a.bars;
  }
};

class EmptyRatioSet : public std::runtime_error {
 public:
  explicit EmptyRatioSet(int mold_class)
      : std::runtime_error("no cutting or overlapping pattern produces mold class " +
                           std::to_string(mold_class + 1)),
        mold_class_(mold_class) {}
  int mold_class() const { return mold_class_; }

 private:
  int mold_class_;
};

// Waste-per-bar ratios for mold class `gamma`: new-bar cuts without and with a
// leftover, leftover cuts, and overlap wastes. Sorted ascending, duplicates of
// equal value removed. Throws EmptyRatioSet when nothing produces the class.
std::vector<WasteRatio> candidate_ratios(const Instance& inst, const PatternSet& pats,
                                         int gamma);

struct ClassBound {
  int mold_class = 0;
  std::int64_t bar_count_lb = 0;
  WasteRatio min_ratio;
};

struct BoundBreakdown {
  std::int64_t makespan_lb = 0;
  double waste_lb = 0.0;  // meters
  // weights[0] * makespan_lb + min(weights[1..3]) * waste_lb; the plain sum
  // when every weight is 1.
  double total = 0.0;
  std::vector<ClassBound> per_class;  // classes with a nonempty ratio set
};

BoundBreakdown lower_bound(const Instance& inst, const PatternSet& pats);

}  // namespace beamforge
