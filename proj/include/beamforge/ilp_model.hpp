#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "beamforge/evaluation.hpp"
#include "beamforge/instance.hpp"
#include "beamforge/patterns.hpp"

namespace beamforge {

enum class VarKind { x, z, y, yl, o };

// Indices are 1-based as they appear in variable names; `pattern` is the
// global pattern id (0 for the continuation pattern in x variables).
struct Variable {
  VarKind kind = VarKind::x;
  std::string name;
  int pattern = 0;
  int mold = 0;
  int period = 0;
  int bar = 0;
  int leftover = 0;
  bool binary = false;
  bool fixed_zero = false;  // x that could not finish inside the horizon
};

enum class Sense { le, ge, eq };

struct Term {
  int var = 0;
  std::int64_t coef = 0;
};

struct Row {
  std::string group;  // "2".."8", "9a", "9b", "10"
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::le;
  std::int64_t rhs = 0;
};

// coefficient = weights[lambda] * amount, with waste amounts in centimeters
// scaled to meters.
struct ObjectiveTerm {
  int var = 0;
  int lambda = 0;
  std::int64_t amount = 0;  // periods for lambda 0, waste cm otherwise
};

struct IlpModel {
  int horizon = 0;
  int num_molds = 0;
  std::array<double, 4> weights{1.0, 1.0, 1.0, 1.0};
  std::vector<Variable> vars;
  std::vector<Row> rows;
  std::vector<ObjectiveTerm> objective;
  // Q*(m): continuation pattern 0 followed by the packing ids of the mold's class.
  std::vector<std::vector<PatternId>> admissible;

  int count(VarKind kind) const;
  double coefficient(const ObjectiveTerm& term) const;
  std::optional<int> x_var(PatternId pattern, int mold, int period) const;  // 1-based mold/period
  int z_var(int period) const { return z_first + period - 1; }
  std::optional<int> cut_var(PatternId pattern) const;
  std::optional<int> overlap_var(PatternId pattern) const;

  int z_first = 0;
  std::vector<int> x_first;            // per mold
  std::vector<int> cut_vars;           // per cutting pattern, in id order
  std::vector<int> overlap_vars;       // per overlapping pattern, in id order
  PatternId first_cut_id = 0;
  PatternId first_overlap_id = 0;
};

IlpModel build_model(const Instance& inst, const PatternSet& pats);

// Values for every variable, indexed like IlpModel::vars.
using Assignment = std::vector<std::int64_t>;

struct Violation {
  std::string group;  // row group, or "domain" for integrality and bounds
  std::string name;
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
};

// Empty iff `a` satisfies every row and variable domain. Throws
// std::invalid_argument when `a` is not sized to the model.
std::vector<Violation> check_assignment(const IlpModel& model, const Assignment& a);

// The objective split into its four unweighted terms.
ObjectiveTerms objective_terms(const IlpModel& model, const Assignment& a);
double objective_value(const IlpModel& model, const Assignment& a);

// Encodes the decoded timetable and bar genes of `ch` as model values.
Assignment induce_assignment(const IlpModel& model, const Chromosome& ch, const Instance& inst,
                             const PatternSet& pats);

std::string emit_lp(const IlpModel& model);

// The subset of the LP text format that emit_lp writes.
struct LpTerm {
  double coef = 0.0;
  std::string var;
  bool operator==(const LpTerm&) const = default;
};

struct LpRow {
  std::string name;
  std::vector<LpTerm> terms;
  Sense sense = Sense::le;
  double rhs = 0.0;
  bool operator==(const LpRow&) const = default;
};

struct LpProblem {
  std::vector<LpTerm> objective;
  std::vector<LpRow> rows;
  std::vector<std::string> fixed_zero;
  std::vector<std::string> generals;
  std::vector<std::string> binaries;
  bool operator==(const LpProblem&) const = default;
};

LpProblem to_lp_problem(const IlpModel& model);
// Throws ParseError on text outside the supported subset.
LpProblem parse_lp(std::string_view text);

}  // namespace beamforge
