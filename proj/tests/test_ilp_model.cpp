#include <gtest/gtest.h>

#include <map>

#include "beamforge/ga.hpp"
#include "beamforge/ilp_model.hpp"
#include "test_support.hpp"

namespace beamforge {
namespace {

using test::cm;

std::map<std::string, int> rows_per_group(const IlpModel& model) {
  std::map<std::string, int> out;
  for (const auto& r : model.rows) ++out[r.group];
  return out;
}

class WorkedModel : public ::testing::Test {
 protected:
  Instance inst = cwp000();
  PatternSet pats = enumerate_patterns(inst);
  IlpModel model = build_model(inst, pats);

  Chromosome optimum() const {
    return {{{2, 4},
             {6, 2},
             {test::cut_id(pats, 3, {1, 0}, {0, 0, 0, 0}), 2},
             {test::cut_id(pats, 0, {2, 0}, {0, 0, 0, 0}), 1},
             {test::cut_id(pats, 0, {0, 1}, {0, 0, 0, 0}), 2}}};
  }
};

TEST_F(WorkedModel, VariableCounts) {
  // Molds 1-4 admit P_0 and two packing patterns, mold 5 admits P_0 and four,
  // over three periods.
  EXPECT_EQ(model.count(VarKind::x), (4 * 3 + 5) * 3);
  EXPECT_EQ(model.count(VarKind::z), 3);
  EXPECT_EQ(model.count(VarKind::y) + model.count(VarKind::yl), 10);
  EXPECT_EQ(model.count(VarKind::o), 12);
  EXPECT_EQ(model.admissible[0], (std::vector<PatternId>{0, 1, 2}));
  EXPECT_EQ(model.admissible[4], (std::vector<PatternId>{0, 3, 4, 5, 6}));
}

TEST_F(WorkedModel, RowCountsPerGroup) {
  const int M = 5, T = 3, V = 4, W = 1, classes = 2, lengths = 2;
  const std::map<std::string, int> expected{
      {"2", M * T},       {"3", lengths}, {"5", M},  {"6", M * (T - 1)},
      {"7", T},           {"8", M * (T - 1)},        {"9a", V},
      {"9b", W},          {"10", classes},
  };
  EXPECT_EQ(rows_per_group(model), expected);
}

TEST_F(WorkedModel, ContinuationRowsForLongCuring) {
  inst.beam_types[0].curing_time = 2;
  const PatternSet p2 = enumerate_patterns(inst);
  const IlpModel m2 = build_model(inst, p2);
  // One aggregated row per (pattern, mold, start period that can finish).
  EXPECT_EQ(rows_per_group(m2)["4"], (4 * 2 + 4) * (3 - 2 + 1));
  int fixed = 0;
  for (const auto& v : m2.vars) fixed += v.fixed_zero;
  EXPECT_EQ(fixed, 4 * 2 + 4);
}

TEST_F(WorkedModel, ZeroWeightsZeroObjective) {
  inst.weights = {0.0, 0.0, 0.0, 0.0};
  const IlpModel m0 = build_model(inst, pats);
  for (const auto& term : m0.objective) EXPECT_EQ(m0.coefficient(term), 0.0);
}

TEST_F(WorkedModel, OptimumInducesFeasibleAssignment) {
  const Assignment a = induce_assignment(model, optimum(), inst, pats);
  EXPECT_TRUE(check_assignment(model, a).empty());
  EXPECT_EQ(objective_value(model, a), fitness(optimum(), inst, pats));
  EXPECT_NEAR(objective_value(model, a), 2.3, 1e-12);
}

TEST_F(WorkedModel, DoubleStartViolatesGroupTwo) {
  Assignment a = induce_assignment(model, optimum(), inst, pats);
  a[*model.x_var(1, 1, 1)] = 1;
  const auto v = check_assignment(model, a);
  ASSERT_FALSE(v.empty());
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const Violation& x) {
    return x.group == "2" && x.name == "c2_1_1";
  }));
}

TEST_F(WorkedModel, StockOverrunViolatesGroupNine) {
  Assignment a = induce_assignment(model, optimum(), inst, pats);
  a[*model.cut_var(test::cut_id(pats, 3, {1, 0}, {0, 0, 0, 0}))] = 99;
  const auto v = check_assignment(model, a);
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const Violation& x) {
    return x.group == "9a" && x.name == "c9a_4" && x.lhs == 99 && x.rhs == 25;
  }));
}

TEST_F(WorkedModel, DomainViolations) {
  Assignment a = induce_assignment(model, optimum(), inst, pats);
  a[model.z_var(3)] = 2;
  const auto v = check_assignment(model, a);
  EXPECT_TRUE(std::any_of(v.begin(), v.end(), [](const Violation& x) {
    return x.group == "domain" && x.name == "z_3";
  }));
  EXPECT_THROW(check_assignment(model, Assignment(3, 0)), std::invalid_argument);
}

TEST_F(WorkedModel, EmissionIsDeterministicAndParses) {
  const std::string text = emit_lp(model);
  EXPECT_EQ(emit_lp(build_model(inst, pats)), text);
  EXPECT_EQ(text.rfind("Minimize\n", 0), 0u);
  EXPECT_NE(text.find("\nSubject To\n"), std::string::npos);
  EXPECT_NE(text.find("\nBounds\n"), std::string::npos);
  EXPECT_NE(text.find("\nGenerals\n"), std::string::npos);
  EXPECT_NE(text.find("\nBinaries\n"), std::string::npos);
  EXPECT_EQ(text.substr(text.size() - 4), "End\n");

  int constraint_lines = 0;
  std::istringstream in(text);
  std::string line;
  bool in_rows = false;
  while (std::getline(in, line)) {
    if (line == "Subject To") {
      in_rows = true;
    } else if (line == "Bounds") {
      in_rows = false;
    } else if (in_rows) {
      ++constraint_lines;
    }
  }
  EXPECT_EQ(constraint_lines, static_cast<int>(model.rows.size()));
  EXPECT_EQ(parse_lp(text), to_lp_problem(model));
}

TEST_F(WorkedModel, ParserRejectsForeignText) {
  EXPECT_THROW(parse_lp("Maximize\n obj: x\nEnd\n"), ParseError);
  EXPECT_THROW(parse_lp("Minimize\n obj: 1 x\nSubject To\n c: 1 x <=\nEnd\n"), ParseError);
}

TEST(IlpModel, EmptyPatternSetHasOnlyMakespanObjective) {
  const Instance inst = cwp000();
  const IlpModel model = build_model(inst, PatternSet{});
  for (const auto& term : model.objective) {
    EXPECT_EQ(model.vars[term.var].kind, VarKind::z);
  }
  const std::string text = emit_lp(model);
  EXPECT_NE(text.find(" obj: 1 z_1 + 1 z_2 + 1 z_3\n"), std::string::npos);
  EXPECT_EQ(parse_lp(text), to_lp_problem(model));
}

// Every constructed feasible chromosome maps to a feasible model point with
// the same objective.
TEST(IlpModel, ConstructionsCrossCheck) {
  std::mt19937_64 gen(17);
  int checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const Instance inst = test::tiny_instance(gen, 1 + trial % 2, 2 + trial % 3, 6, 6);
    const PatternSet pats = enumerate_patterns(inst);
    const IlpModel model = build_model(inst, pats);
    const GaContext ctx(inst, pats);
    Rng rng(trial);
    for (int n = 0; n < 30; ++n) {
      const auto ch = random_solution(ctx, rng);
      if (!ch) continue;
      ++checked;
      const Assignment a = induce_assignment(model, *ch, inst, pats);
      EXPECT_TRUE(check_assignment(model, a).empty());
      EXPECT_EQ(objective_terms(model, a), ctx.evaluator().evaluate(*ch)->terms);
      EXPECT_EQ(objective_value(model, a), fitness(*ch, inst, pats));
    }
  }
  EXPECT_GT(checked, 50);
}

}  // namespace
}  // namespace beamforge
