#include <gtest/gtest.h>

#include <cmath>

#include "beamforge/instance.hpp"
#include "test_support.hpp"

namespace beamforge {
namespace {

using test::cm;

TEST(Length, ParsesTwoDecimalMeters) {
  EXPECT_EQ(Length::from_meters(5.95).cm(), 595);
  EXPECT_EQ(Length::from_meters(11.95).cm(), 1195);
  EXPECT_EQ(Length::from_meters(0.3).cm(), 30);
  EXPECT_THROW(Length::from_meters(1.125), std::invalid_argument);
}

TEST(Length, PrintsTrimmedMeters) {
  EXPECT_EQ(cm(595).to_string(), "5.95");
  EXPECT_EQ(cm(1200).to_string(), "12");
  EXPECT_EQ(cm(5).to_string(), "0.05");
  EXPECT_EQ(cm(30).to_string(), "0.3");
}

TEST(Instance, ParsesWorkedExample) {
  const Instance inst = parse_instance(test::read_text(test::data_path("cwp000.json")));
  EXPECT_EQ(inst.num_beam_types(), 1);
  EXPECT_EQ(inst.num_molds(), 5);
  EXPECT_EQ(inst.horizon, 3);
  EXPECT_EQ(inst.num_bar_kinds, 1);
  EXPECT_EQ(inst.num_leftover_kinds, 4);
  EXPECT_EQ(inst.mold_lengths, (std::vector<Length>{cm(595), cm(595), cm(595), cm(595), cm(1195)}));
  EXPECT_EQ(inst.bar_lengths, (std::vector<Length>{cm(1200), cm(200), cm(500), cm(600), cm(800)}));
  EXPECT_EQ(inst.stock, (std::vector<std::int64_t>{30, 16, 28, 25, 29}));
  EXPECT_EQ(inst.overlap_loss, cm(30));
  ASSERT_EQ(inst.beam_types.size(), 1u);
  EXPECT_EQ(inst.beam_types[0].lengths, (std::vector<Length>{cm(112), cm(330)}));
  EXPECT_EQ(inst.beam_types[0].demands, (std::vector<std::int64_t>{5, 10}));
  EXPECT_EQ(inst.beam_types[0].curing_time, 1);
  EXPECT_EQ(inst.beam_types[0].bars_per_beam, 1);
  EXPECT_EQ(inst.distinct_mold_lengths, (std::vector<Length>{cm(595), cm(1195)}));
  EXPECT_EQ(inst.molds_in_class(0), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(inst.molds_in_class(1), (std::vector<int>{4}));
  EXPECT_EQ(inst, cwp000());
}

TEST(Instance, AcceptsZeroDemand) {
  Instance inst = cwp000();
  inst.beam_types[0].demands = {0, 0};
  const Instance back = parse_instance(serialize_instance(inst));
  EXPECT_EQ(back.beam_types[0].demands, (std::vector<std::int64_t>{0, 0}));
}

TEST(Instance, RejectsNegativeStock) {
  std::string text = serialize_instance(cwp000());
  const auto pos = text.find("30");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 2, "-1");
  try {
    parse_instance(text);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0], "stock must be nonnegative");
  }
}

TEST(Instance, ReportsSyntaxErrorPosition) {
  try {
    parse_instance("{\"C\": 1,, }");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_GT(e.position(), 0u);
  }
}

TEST(Instance, ReportsMissingKeys) {
  EXPECT_THROW(parse_instance("{\"C\": 1}"), ValidationError);
}

TEST(Instance, ValidationFlagsSingleViolations) {
  EXPECT_TRUE(validate_instance(cwp000()).empty());

  Instance curing = cwp000();
  curing.beam_types[0].curing_time = 0;
  EXPECT_EQ(validate_instance(curing).size(), 1u);

  Instance dup = cwp000();
  dup.beam_types[0].lengths = {cm(112), cm(112)};
  EXPECT_EQ(validate_instance(dup).size(), 1u);

  Instance eps = cwp000();
  eps.overlap_loss = cm(0);
  EXPECT_EQ(validate_instance(eps).size(), 1u);
}

TEST(Instance, RoundTripsExactly) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = generate_instance(seed, 1 + seed % 7, 5 + seed % 11);
    EXPECT_EQ(parse_instance(serialize_instance(inst)), inst);
  }
  EXPECT_EQ(parse_instance(serialize_instance(cwp000())), cwp000());
}

TEST(Generator, IsPureFunctionOfArguments) {
  EXPECT_EQ(serialize_instance(generate_instance(7, 1, 5)),
            serialize_instance(generate_instance(7, 1, 5)));
  EXPECT_NE(serialize_instance(generate_instance(7, 1, 5)),
            serialize_instance(generate_instance(8, 1, 5)));
}

TEST(Generator, MatchesPublishedRanges) {
  const std::vector<std::int64_t> pool{112, 145, 235, 250, 265, 295, 330};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int types = 1 + static_cast<int>(seed % 7);
    const int molds = seed % 2 ? 15 : 30;
    const Instance inst = generate_instance(seed, types, molds);
    ASSERT_TRUE(validate_instance(inst).empty());
    ASSERT_EQ(inst.num_beam_types(), types);
    ASSERT_EQ(inst.num_molds(), molds);

    double weighted = 0.0;
    int max_bars = 0;
    for (int c = 0; c < types; ++c) {
      const BeamType& bt = inst.beam_types[c];
      EXPECT_GE(bt.num_lengths(), 2);
      double len = 0.0;
      for (int k = 0; k < bt.num_lengths(); ++k) {
        EXPECT_NE(std::find(pool.begin(), pool.end(), bt.lengths[k].cm()), pool.end());
        EXPECT_GE(bt.demands[k], 17);
        EXPECT_LE(bt.demands[k], 50);
        len += bt.lengths[k].meters() * static_cast<double>(bt.demands[k]);
      }
      if (types <= 3) {
        EXPECT_EQ(bt.curing_time, c + 1);
      } else {
        EXPECT_GE(bt.curing_time, 1);
        EXPECT_LE(bt.curing_time, 3);
      }
      EXPECT_GE(bt.bars_per_beam, 1);
      EXPECT_LE(bt.bars_per_beam, 3);
      weighted += bt.curing_time * len;
      max_bars = std::max(max_bars, bt.bars_per_beam);
    }
    double capacity = 0.0;
    for (Length l : inst.mold_lengths) {
      EXPECT_TRUE(l.cm() == 595 || l.cm() == 1195);
      capacity += l.meters();
    }
    const double t = 1.5 * weighted / capacity;
    const long expected_t = std::lround(std::ceil(t - 1e-9));
    EXPECT_EQ(inst.horizon, std::max(1L, expected_t));
    EXPECT_GE(inst.horizon, static_cast<long>(std::ceil(weighted / capacity - 1e-9)));

    const std::int64_t ub = 2LL * inst.horizon * molds * max_bars;
    EXPECT_EQ(inst.stock[0], ub);
    EXPECT_EQ(inst.bar_lengths,
              (std::vector<Length>{cm(1200), cm(200), cm(500), cm(600), cm(800)}));
    for (int v = 1; v <= 4; ++v) {
      EXPECT_GE(inst.stock[v], (ub + 4) / 5);
      EXPECT_LE(inst.stock[v], ub);
    }
  }
}

}  // namespace
}  // namespace beamforge
