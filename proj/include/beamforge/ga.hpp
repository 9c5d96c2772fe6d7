#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "beamforge/evaluation.hpp"

namespace beamforge {

using Rng = std::mt19937_64;

struct GaParams {
  int population_size = 25;          // TP
  std::int64_t generations = 1000;   // NG
  double mutation_rate = 0.05;       // MUT
  std::int64_t restart_patience = 200;  // RST
  int construction_pool = 100;       // AS
  int crossover_kind = 1;            // CRS
  int restart_elites = 5;            // TER
  std::uint64_t seed = 0;
};

// Parameters stated relative to r, the number of packing patterns:
// NG = ceil(ng_mult r), RST = ceil(rst_fraction NG), AS = ceil(as_mult r).
struct RelativeParams {
  int population_size = 25;
  double ng_mult = 1000.0;
  double mutation_rate = 0.05;
  double rst_fraction = 0.2;
  double as_mult = 100.0;
  int crossover_kind = 1;
  int restart_elites = 5;
};

GaParams resolve_params(const RelativeParams& rel, const PatternSet& pats, std::uint64_t seed);

// TP=25, NG=1000r, MUT=0.05, RST=ceil(0.2 NG), AS=100r, CRS=1, TER=5 where r
// is the number of packing patterns.
GaParams default_params(const PatternSet& pats, std::uint64_t seed = 0);
// Throws std::invalid_argument naming the offending field.
void validate_params(const GaParams& params);

class InfeasibleInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-instance lookup tables shared by the operators. Holds references to
// `inst` and `pats`.
class GaContext {
 public:
  GaContext(const Instance& inst, const PatternSet& pats);

  const Instance& instance() const { return eval_.instance(); }
  const PatternSet& patterns() const { return eval_.patterns(); }
  const Evaluator& evaluator() const { return eval_; }

  // Cutting patterns yielding class g, and those yielding only class g.
  const std::vector<PatternId>& cutters(int g) const { return cutters_[g]; }
  bool cuts_only(PatternId cut, int g) const;
  const std::vector<PatternId>& overlappers(int g) const { return overlappers_[g]; }

 private:
  Evaluator eval_;
  std::vector<std::vector<PatternId>> cutters_;
  std::vector<std::vector<PatternId>> overlappers_;
};

struct Member {
  Chromosome chromosome;
  double fitness = 0.0;
};

// Distinct feasible members sorted by fitness, best first; ties keep arrival
// order.
class Population {
 public:
  explicit Population(std::size_t capacity) : capacity_(capacity) {}

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<Member>& members() const { return members_; }
  const Member& best() const { return members_.front(); }
  const Member& worst() const { return members_.back(); }
  double mean_fitness() const;

  bool contains(const Chromosome& ch) const;
  // Adds `m` if it is new and there is room or it beats the worst member,
  // evicting the worst when full. Returns whether it was admitted.
  bool offer(Member m);

 private:
  std::size_t capacity_;
  std::vector<Member> members_;
  std::set<std::vector<Gene>> keys_;
};

// Best `capacity` distinct candidates by fitness, stable on ties.
Population select_best_distinct(std::vector<Member> candidates, std::size_t capacity);

// Pseudo-random construction. nullopt when the result is not feasible.
std::optional<Chromosome> random_solution(const GaContext& ctx, Rng& rng);

// Throws InfeasibleInstance if no construction succeeds.
Population init_population(const GaParams& params, const GaContext& ctx, Rng& rng);

// Repair sub-steps, each working on genes in chromosome order.
// Trims packing frequencies to the shortest prefix meeting demand.
void remove_surplus_packing(const GaContext& ctx, Chromosome& ch);
// Raises packing frequencies until demand is met; false if stuck.
bool fix_beam_demand(const GaContext& ctx, Chromosome& ch);
// Lowers cutting and overlapping frequencies on over-used bar kinds.
void fix_bar_stock(const GaContext& ctx, Chromosome& ch);
// Moves the bars produced per class towards the bars required.
void fix_bar_balance(const GaContext& ctx, Chromosome& ch);

// Full repair. Returns a feasible chromosome without zero genes, or nullopt.
std::optional<Chromosome> repair(const GaContext& ctx, Chromosome ch);

std::optional<Chromosome> crossover1(const GaContext& ctx, const Chromosome& a,
                                     const Chromosome& b, double mutation_rate, Rng& rng);
std::optional<Chromosome> crossover2(const GaContext& ctx, const Chromosome& a,
                                     const Chromosome& b, Rng& rng);
// Unrepaired offspring of the two crossovers; the operators above add repair.
Chromosome blend1(const Chromosome& a, const Chromosome& b, double mutation_rate, Rng& rng);
Chromosome blend2(const Chromosome& a, const Chromosome& b, Rng& rng);

// Throws std::invalid_argument when every pattern id is already in `ch`.
std::optional<Chromosome> mutate(const GaContext& ctx, const Chromosome& ch, Rng& rng);
// Unrepaired mutation: a random gene's pattern is replaced by a random
// pattern outside the chromosome, keeping position and frequency.
Chromosome swap_random_pattern(const Chromosome& ch, const PatternSet& pats, Rng& rng);
// Replaces gene `p1` by `p2` in place, carrying over its frequency.
Chromosome swap_pattern(const Chromosome& ch, PatternId p1, PatternId p2);

// Moves gene i (0-based) to just after gene k, i < k.
Chromosome insert_move(const Chromosome& ch, int i, int k);
Chromosome local_search_insert(const GaContext& ctx, const Chromosome& ch);

struct TracePoint {
  std::int64_t generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
};

struct GaResult {
  Chromosome best;
  double fitness = 0.0;
  std::vector<TracePoint> trace;  // generation 0 is the initial population
  std::int64_t rejections = 0;
  std::int64_t restarts = 0;
};

GaResult run_ga(const Instance& inst, const PatternSet& pats, const GaParams& params);

}  // namespace beamforge
