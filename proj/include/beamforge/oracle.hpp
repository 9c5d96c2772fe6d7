#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "beamforge/evaluation.hpp"

namespace beamforge {

struct OracleCaps {
  int max_frequency = 10;  // per gene
  int max_genes = 16;      // per chromosome
  std::int64_t node_budget = 50'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::int64_t nodes)
      : std::runtime_error("search budget of " + std::to_string(nodes) + " nodes exceeded") {}
};

struct OracleResult {
  std::optional<Chromosome> best;  // empty when nothing within the caps is feasible
  double value = 0.0;
  std::int64_t nodes = 0;

  bool feasible() const { return best.has_value(); }
};

// Exact minimum of the fitness over every chromosome whose genes respect the
// caps, gene order included. Meant for tiny instances; throws BudgetExceeded
// once the node budget is spent.
OracleResult exhaustive_optimum(const Instance& inst, const PatternSet& pats,
                                const OracleCaps& caps = {});

}  // namespace beamforge
