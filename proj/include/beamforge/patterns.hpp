#pragma once

#include <optional>
#include <vector>

#include "beamforge/instance.hpp"
#include "beamforge/length.hpp"

namespace beamforge {

// Global 1-based pattern index: packing 1..r, cutting r+1..r+H,
// overlapping r+H+1..r+H+O.
using PatternId = int;

// A multiset of beams of one type cast together in one mold class.
struct PackingPattern {
  PatternId id = 0;
  int beam_type = 0;
  std::vector<int> counts;  // per length of the beam type
  int mold_class = 0;
  Length used_capacity;
  int duration = 1;

  bool operator==(const PackingPattern&) const = default;
};

// One stock bar cut into mold-length bars plus at most one leftover kind.
struct CuttingPattern {
  PatternId id = 0;
  int source_bar = 0;
  std::vector<int> item_counts;      // per mold class
  std::vector<int> leftover_counts;  // per leftover kind
  Length waste;

  std::optional<int> leftover_kind() const;
  int total_items() const;
  bool operator==(const CuttingPattern&) const = default;
};

// Two leftovers spliced into one bar of a mold class length.
struct OverlappingPattern {
  PatternId id = 0;
  int produced_class = 0;
  std::vector<int> leftover_counts;  // sums to 2
  Length waste;

  bool operator==(const OverlappingPattern&) const = default;
};

enum class PatternKind { packing, cutting, overlapping };

class PatternSet {
 public:
  PatternSet() = default;
  // Assigns the global ids in list order.
  PatternSet(std::vector<PackingPattern> packing, std::vector<CuttingPattern> cutting,
             std::vector<OverlappingPattern> overlapping);

  const std::vector<PackingPattern>& packing() const { return packing_; }
  const std::vector<CuttingPattern>& cutting() const { return cutting_; }
  const std::vector<OverlappingPattern>& overlapping() const { return overlapping_; }

  int num_packing() const { return static_cast<int>(packing_.size()); }
  int num_cutting() const { return static_cast<int>(cutting_.size()); }
  int num_overlapping() const { return static_cast<int>(overlapping_.size()); }
  int size() const { return num_packing() + num_cutting() + num_overlapping(); }

  bool valid(PatternId id) const { return id >= 1 && id <= size(); }
  PatternKind kind(PatternId id) const;
  const PackingPattern& packing_pattern(PatternId id) const;
  const CuttingPattern& cutting_pattern(PatternId id) const;
  const OverlappingPattern& overlapping_pattern(PatternId id) const;

  bool operator==(const PatternSet&) const = default;

 private:
  std::vector<PackingPattern> packing_;
  std::vector<CuttingPattern> cutting_;
  std::vector<OverlappingPattern> overlapping_;
};

struct PackingOptions {
  // When false the lower end of the capacity window is dropped and every
  // nonempty pattern fitting the mold class is produced.
  bool maximal_only = true;
};

// Patterns come back with id 0; PatternSet assigns the global ids.
std::vector<PackingPattern> enumerate_packing_patterns(const Instance& inst,
                                                       PackingOptions options = {});
std::vector<CuttingPattern> enumerate_cutting_patterns(const Instance& inst);
std::vector<OverlappingPattern> enumerate_overlapping_patterns(const Instance& inst);

PatternSet enumerate_patterns(const Instance& inst, PackingOptions options = {});

// Same beam type and componentwise counts(p) >= counts(q).
bool contains(const PackingPattern& p, const PackingPattern& q);

}  // namespace beamforge
