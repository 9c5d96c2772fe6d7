#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <set>
#include <tuple>

#include "beamforge/patterns.hpp"
#include "test_support.hpp"

namespace beamforge {
namespace {

using test::cm;

using PackingKey = std::tuple<int, int, std::vector<int>, std::int64_t>;
using CuttingKey = std::tuple<int, std::vector<int>, std::vector<int>, std::int64_t>;
using OverlapKey = std::tuple<int, std::vector<int>, std::int64_t>;

std::multiset<PackingKey> keys(const std::vector<PackingPattern>& ps) {
  std::multiset<PackingKey> out;
  for (const auto& p : ps) out.insert({p.beam_type, p.mold_class, p.counts, p.used_capacity.cm()});
  return out;
}

std::multiset<CuttingKey> keys(const std::vector<CuttingPattern>& cs) {
  std::multiset<CuttingKey> out;
  for (const auto& c : cs) out.insert({c.source_bar, c.item_counts, c.leftover_counts, c.waste.cm()});
  return out;
}

std::multiset<OverlapKey> keys(const std::vector<OverlappingPattern>& os) {
  std::multiset<OverlapKey> out;
  for (const auto& o : os) out.insert({o.produced_class, o.leftover_counts, o.waste.cm()});
  return out;
}

// Rows of the published cwp000 tables, in centimeters.
TEST(Patterns, WorkedExampleMatchesPublishedTables) {
  const auto t0 = std::chrono::steady_clock::now();
  const PatternSet pats = enumerate_patterns(cwp000());
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 1.0);

  const std::multiset<PackingKey> packing{
      {0, 0, {5, 0}, 560},  {0, 0, {2, 1}, 554},  {0, 1, {10, 0}, 1120},
      {0, 1, {7, 1}, 1114}, {0, 1, {4, 2}, 1108}, {0, 1, {1, 3}, 1102},
  };
  // Source bar, items per class, leftovers per kind (2, 5, 6, 8 m), waste.
  const std::multiset<CuttingKey> cutting{
      {0, {1, 0}, {0, 0, 0, 0}, 605}, {0, {1, 0}, {1, 0, 0, 0}, 405},
      {0, {1, 0}, {2, 0, 0, 0}, 205}, {0, {1, 0}, {3, 0, 0, 0}, 5},
      {3, {1, 0}, {0, 0, 0, 0}, 5},   {4, {1, 0}, {0, 0, 0, 0}, 205},
      {0, {1, 0}, {0, 0, 1, 0}, 5},   {0, {1, 0}, {0, 1, 0, 0}, 105},
      {0, {2, 0}, {0, 0, 0, 0}, 10},  {0, {0, 1}, {0, 0, 0, 0}, 5},
  };
  const std::multiset<OverlapKey> overlapping{
      {0, {1, 1, 0, 0}, 105},  {0, {0, 2, 0, 0}, 405}, {0, {1, 0, 1, 0}, 205},
      {0, {0, 0, 2, 0}, 605},  {0, {0, 1, 1, 0}, 505}, {0, {0, 0, 1, 1}, 805},
      {0, {1, 0, 0, 1}, 405},  {0, {0, 1, 0, 1}, 705}, {0, {0, 0, 0, 2}, 1005},
      {1, {0, 0, 0, 2}, 405},  {1, {0, 1, 0, 1}, 105}, {1, {0, 0, 1, 1}, 205},
  };
  EXPECT_EQ(pats.num_packing(), 6);
  EXPECT_EQ(pats.num_cutting(), 10);
  EXPECT_EQ(pats.num_overlapping(), 12);
  EXPECT_EQ(keys(pats.packing()), packing);
  EXPECT_EQ(keys(pats.cutting()), cutting);
  EXPECT_EQ(keys(pats.overlapping()), overlapping);

  // Packing ids coincide with the published numbering.
  const std::vector<std::vector<int>> by_id{{5, 0}, {2, 1}, {10, 0}, {7, 1}, {4, 2}, {1, 3}};
  for (int i = 0; i < 6; ++i) EXPECT_EQ(pats.packing_pattern(i + 1).counts, by_id[i]);
  for (const auto& p : pats.packing()) EXPECT_EQ(p.duration, 1);
}

TEST(Patterns, IdsAreContiguousByKind) {
  const PatternSet pats = enumerate_patterns(cwp000());
  for (int id = 1; id <= 6; ++id) EXPECT_EQ(pats.kind(id), PatternKind::packing);
  for (int id = 7; id <= 16; ++id) EXPECT_EQ(pats.kind(id), PatternKind::cutting);
  for (int id = 17; id <= 28; ++id) EXPECT_EQ(pats.kind(id), PatternKind::overlapping);
  EXPECT_FALSE(pats.valid(0));
  EXPECT_FALSE(pats.valid(29));
  EXPECT_EQ(enumerate_patterns(cwp000()), pats);
}

TEST(Patterns, SingleLengthSingleMold) {
  Instance inst = cwp000();
  inst.beam_types[0].lengths = {cm(330)};
  inst.beam_types[0].demands = {1};
  inst.mold_lengths = {cm(595)};
  inst.refresh_mold_classes();
  const auto ps = enumerate_packing_patterns(inst);
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].counts, std::vector<int>{1});
  EXPECT_EQ(ps[0].used_capacity, cm(330));
}

TEST(Patterns, BeamLongerThanEveryMold) {
  Instance inst = cwp000();
  inst.beam_types[0].lengths = {cm(1300)};
  inst.beam_types[0].demands = {1};
  EXPECT_TRUE(enumerate_packing_patterns(inst).empty());
}

TEST(Patterns, LargeSpliceLossLeavesNoOverlaps) {
  Instance inst = cwp000();
  inst.overlap_loss = cm(10000);
  EXPECT_TRUE(enumerate_overlapping_patterns(inst).empty());
}

TEST(Patterns, NothingFitsAnyBar) {
  Instance inst = cwp000();
  inst.mold_lengths = {cm(1300)};
  inst.refresh_mold_classes();
  inst.bar_lengths = {cm(1200), cm(1250), cm(1260), cm(1270), cm(1280)};
  EXPECT_TRUE(enumerate_cutting_patterns(inst).empty());
}

TEST(Patterns, ContainsIsComponentwise) {
  PackingPattern p{0, 0, {10, 0}, 1, cm(1120), 1};
  PackingPattern q{0, 0, {9, 0}, 1, cm(1008), 1};
  PackingPattern r{0, 0, {7, 1}, 1, cm(1114), 1};
  PackingPattern other{0, 1, {9, 0}, 1, cm(1008), 1};
  EXPECT_TRUE(contains(p, q));
  EXPECT_FALSE(contains(q, p));
  EXPECT_FALSE(contains(p, r));
  EXPECT_TRUE(contains(p, p));
  EXPECT_FALSE(contains(p, other));
}

// Independent filters over the full Cartesian product of counts.
std::multiset<PackingKey> brute_packing(const Instance& inst, bool maximal_only) {
  std::multiset<PackingKey> out;
  for (int c = 0; c < inst.num_beam_types(); ++c) {
    const BeamType& bt = inst.beam_types[c];
    std::int64_t shortest = bt.lengths[0].cm();
    for (Length l : bt.lengths) shortest = std::min(shortest, l.cm());
    for (int g = 0; g < inst.num_mold_classes(); ++g) {
      const std::int64_t cap = inst.distinct_mold_lengths[g].cm();
      std::vector<int> counts(bt.num_lengths(), 0);
      const int hi = static_cast<int>(cap / shortest);
      while (true) {
        std::int64_t used = 0;
        bool any = false;
        for (int k = 0; k < bt.num_lengths(); ++k) {
          used += counts[k] * bt.lengths[k].cm();
          any = any || counts[k] > 0;
        }
        if (any && used <= cap && (!maximal_only || used > cap - shortest)) {
          out.insert({c, g, counts, used});
        }
        int k = 0;
        while (k < bt.num_lengths() && ++counts[k] > hi) counts[k++] = 0;
        if (k == bt.num_lengths()) break;
      }
    }
  }
  return out;
}

std::multiset<CuttingKey> brute_cutting(const Instance& inst) {
  std::multiset<CuttingKey> out;
  const int classes = inst.num_mold_classes();
  const int kinds = inst.num_leftover_kinds;
  for (int w = 0; w < inst.num_bars(); ++w) {
    const std::int64_t bar = inst.bar_lengths[w].cm();
    std::vector<int> items(classes, 0);
    while (true) {
      std::int64_t used = 0;
      bool any = false;
      for (int g = 0; g < classes; ++g) {
        used += items[g] * inst.distinct_mold_lengths[g].cm();
        any = any || items[g] > 0;
      }
      if (any && used <= bar) {
        out.insert({w, items, std::vector<int>(kinds, 0), bar - used});
        if (!inst.is_leftover(w)) {
          for (int v = 0; v < kinds; ++v) {
            const std::int64_t len = inst.leftover_length(v).cm();
            for (int n = 1; used + n * len <= bar; ++n) {
              std::vector<int> left(kinds, 0);
              left[v] = n;
              out.insert({w, items, left, bar - used - n * len});
            }
          }
        }
      }
      int g = 0;
      while (g < classes && ++items[g] > bar / inst.distinct_mold_lengths[g].cm()) items[g++] = 0;
      if (g == classes) break;
    }
  }
  return out;
}

std::multiset<OverlapKey> brute_overlapping(const Instance& inst) {
  std::multiset<OverlapKey> out;
  const int kinds = inst.num_leftover_kinds;
  for (int g = 0; g < inst.num_mold_classes(); ++g) {
    const std::int64_t need = inst.distinct_mold_lengths[g].cm() + inst.overlap_loss.cm();
    for (int a = 0; a < kinds; ++a) {
      for (int b = a; b < kinds; ++b) {
        const std::int64_t total = inst.leftover_length(a).cm() + inst.leftover_length(b).cm();
        if (total < need) continue;
        std::vector<int> left(kinds, 0);
        ++left[a];
        ++left[b];
        out.insert({g, left, total - inst.distinct_mold_lengths[g].cm()});
      }
    }
  }
  return out;
}

TEST(Patterns, MatchBruteForceOnRandomInstances) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    Instance inst = test::tiny_instance(rng, 1 + trial % 2, 1 + trial % 4, 5, 3);
    if (trial % 3 == 0) {
      inst.bar_lengths = {cm(1200), cm(150), cm(330), cm(700)};
      inst.num_leftover_kinds = 3;
      inst.stock = {10, 10, 10, 10};
    }
    ASSERT_TRUE(validate_instance(inst).empty());
    EXPECT_EQ(keys(enumerate_packing_patterns(inst)), brute_packing(inst, true));
    EXPECT_EQ(keys(enumerate_packing_patterns(inst, {.maximal_only = false})),
              brute_packing(inst, false));
    EXPECT_EQ(keys(enumerate_cutting_patterns(inst)), brute_cutting(inst));
    EXPECT_EQ(keys(enumerate_overlapping_patterns(inst)), brute_overlapping(inst));
  }
}

TEST(Patterns, StructuralInvariants) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = test::tiny_instance(rng, 2, 3, 5, 3);
    const PatternSet pats = enumerate_patterns(inst);
    int expected = 1;
    int last_type = -1;
    int last_class = -1;
    for (const auto& p : pats.packing()) {
      EXPECT_EQ(p.id, expected++);
      EXPECT_TRUE(std::tie(last_type, last_class) <= std::tie(p.beam_type, p.mold_class));
      last_type = p.beam_type;
      last_class = p.mold_class;
      EXPECT_EQ(p.duration, inst.beam_types[p.beam_type].curing_time);
      for (const auto& q : pats.packing()) {
        if (p.id != q.id && p.beam_type == q.beam_type && p.mold_class == q.mold_class) {
          EXPECT_FALSE(contains(p, q));
        }
      }
    }
    for (const auto& c : pats.cutting()) {
      EXPECT_EQ(c.id, expected++);
      EXPECT_GE(c.waste.cm(), 0);
      EXPECT_GE(c.total_items(), 1);
      int kinds = 0;
      for (int n : c.leftover_counts) kinds += n > 0;
      EXPECT_LE(kinds, 1);
      if (inst.is_leftover(c.source_bar)) {
        EXPECT_EQ(kinds, 0);
      }
    }
    for (const auto& o : pats.overlapping()) {
      EXPECT_EQ(o.id, expected++);
      EXPECT_GE(o.waste, inst.overlap_loss);
      int used = 0;
      for (int n : o.leftover_counts) used += n;
      EXPECT_EQ(used, 2);
    }
  }
}

}  // namespace
}  // namespace beamforge
