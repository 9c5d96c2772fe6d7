#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "beamforge/instance.hpp"
#include "beamforge/patterns.hpp"

namespace beamforge {

struct Gene {
  PatternId pattern = 0;
  std::int64_t frequency = 0;

  auto operator<=>(const Gene&) const = default;
};

// Ordered (pattern, frequency) list. Gene order only matters for the mold
// timetable; all bar and waste accounting is order-free.
struct Chromosome {
  std::vector<Gene> genes;

  int size() const { return static_cast<int>(genes.size()); }
  bool empty() const { return genes.empty(); }
  bool contains(PatternId id) const;
  std::int64_t frequency(PatternId id) const;
  void drop_zero_genes();
  // Genes sorted by pattern id: equal keys mean equal gene multisets.
  std::vector<Gene> canonical() const;

  bool operator==(const Chromosome&) const = default;
};

// The four terms of the weighted objective, unweighted.
struct ObjectiveTerms {
  std::int64_t makespan = 0;
  Length new_bar_waste;           // new-bar cuts without a leftover
  Length new_bar_leftover_waste;  // new-bar cuts that yield a leftover
  Length leftover_waste;          // leftover cuts plus overlaps

  bool operator==(const ObjectiveTerms&) const = default;
};

double weighted_objective(const ObjectiveTerms& terms, const std::array<double, 4>& weights);

struct ScheduledCast {
  PatternId pattern = 0;
  int start = 1;  // 1-based period
  int duration = 1;

  bool operator==(const ScheduledCast&) const = default;
};

struct Schedule {
  std::vector<std::vector<ScheduledCast>> molds;
  int makespan = 0;
  std::vector<bool> used_periods;              // z_t, one per horizon period
  std::vector<std::int64_t> bar_requirements;  // per mold class
  ObjectiveTerms objective;
};

struct InfeasibilityReport {
  bool beam_demand = false;  // type 1
  bool bar_stock = false;    // type 2
  bool bar_balance = false;  // type 3
  bool horizon = false;      // some mold is loaded past the horizon
  int unmet_demands = 0;
  int exceeded_stocks = 0;
  int unbalanced_classes = 0;
  int overloaded_molds = 0;

  bool feasible() const { return !beam_demand && !bar_stock && !bar_balance && !horizon; }
  std::string describe() const;
};

class HorizonError : public std::runtime_error {
 public:
  HorizonError(int mold, int load, int horizon);
  int mold() const { return mold_; }
  int load() const { return load_; }

 private:
  int mold_;
  int load_;
};

class InfeasibleChromosome : public std::runtime_error {
 public:
  explicit InfeasibleChromosome(InfeasibilityReport report);
  const InfeasibilityReport& report() const { return report_; }

 private:
  InfeasibilityReport report_;
};

struct Evaluation {
  ObjectiveTerms terms;
  double fitness = 0.0;
};

// Precomputed per-pattern accounting for one (instance, pattern set) pair.
// Holds references; both must outlive the evaluator.
class Evaluator {
 public:
  Evaluator(const Instance& inst, const PatternSet& pats);

  const Instance& instance() const { return inst_; }
  const PatternSet& patterns() const { return pats_; }

  // Beam demand entries are flattened as offset(c) + k.
  int demand_entries() const { return static_cast<int>(demand_.size()); }
  int demand_index(int beam_type, int k) const { return offsets_[beam_type] + k; }
  const std::vector<std::int64_t>& demand() const { return demand_; }

  std::vector<std::int64_t> produced_beams(const Chromosome& ch) const;
  // Stock consumption per bar kind: cuts by source plus leftovers spliced.
  std::vector<std::int64_t> bars_used(const Chromosome& ch) const;
  // Mold-length bars produced by cuts and overlaps, per class.
  std::vector<std::int64_t> bars_produced(const Chromosome& ch) const;
  // Mold-length bars consumed by the packing genes, per class.
  std::vector<std::int64_t> bars_required(const Chromosome& ch) const;

  bool demand_met(const std::vector<std::int64_t>& produced) const;

  // Throws HorizonError if some mold is loaded beyond the horizon.
  Schedule decode(const Chromosome& ch) const;
  // Decoded makespan, or nullopt when the timetable overruns the horizon.
  std::optional<int> makespan(const Chromosome& ch) const;
  // Waste terms only; makespan left at 0.
  ObjectiveTerms waste_terms(const Chromosome& ch) const;

  InfeasibilityReport classify(const Chromosome& ch) const;
  std::optional<Evaluation> evaluate(const Chromosome& ch) const;
  // Throws InfeasibleChromosome unless classify() reports feasible.
  double fitness(const Chromosome& ch) const;

  // Throws std::out_of_range on an id outside the pattern set.
  void check_ids(const Chromosome& ch) const;

 private:
  std::vector<int> mold_loads(const Chromosome& ch, std::vector<std::vector<ScheduledCast>>* casts) const;

  const Instance& inst_;
  const PatternSet& pats_;
  std::vector<int> offsets_;
  std::vector<std::int64_t> demand_;
  std::vector<std::vector<int>> class_molds_;
};

// Free-function forms of the evaluator operations.
Schedule decode_schedule(const Chromosome& ch, const Instance& inst, const PatternSet& pats);
double fitness(const Chromosome& ch, const Instance& inst, const PatternSet& pats);
InfeasibilityReport classify_infeasibility(const Chromosome& ch, const Instance& inst,
                                           const PatternSet& pats);

// One line per mold: "<index:3> <length:6> |<one char per period>|", where a
// period shows '.' when idle and the base-36 digit of (pattern id mod 36)
// when occupied.
std::string render_gantt(const Schedule& schedule, const Instance& inst);

}  // namespace beamforge
