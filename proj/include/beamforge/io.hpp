#pragma once

#include <string>
#include <vector>

#include "beamforge/bound.hpp"
#include "beamforge/evaluation.hpp"
#include "beamforge/ga.hpp"

namespace beamforge {

// Shortest decimal form of `x` after rounding to 9 fractional digits, so
// sums of centimeter amounts print as "2.3" rather than "2.3000000000000003".
std::string format_number(double x);

// {"packing":[...],"cutting":[...],"overlapping":[...]} with 1-based beam
// type, mold class and bar indices and lengths in meters.
std::string patterns_json(const PatternSet& pats);

// {"makespan_lb":..,"waste_lb":..,"total":..} on one line.
std::string bound_json(const BoundBreakdown& bound);

// genes, makespan, objective, breakdown (the four terms) and the per-mold
// timetable. Throws like Evaluator::fitness on an infeasible chromosome.
std::string solution_json(const Chromosome& ch, const Instance& inst, const PatternSet& pats);

// generation,best_fitness,mean_fitness
std::string trace_csv(const std::vector<TracePoint>& trace);

}  // namespace beamforge
