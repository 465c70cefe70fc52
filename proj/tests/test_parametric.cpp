#include <gtest/gtest.h>

#include <set>

#include "smartskin/parametric.hpp"
#include "support.hpp"

using namespace smartskin;

TEST(ParametricCases, CountAndOrder) {
  const auto cases = generate_cases();
  ASSERT_EQ(cases.size(), 120u);
  for (std::size_t i = 0; i < cases.size(); ++i) EXPECT_EQ(cases[i].id, i);
  EXPECT_EQ(cases.front().rows_label(), "1");
  EXPECT_EQ(cases.front().level, 1);
  EXPECT_EQ(cases.front().mode, ActuationMode::passive_only);
  EXPECT_EQ(cases[59].rows_label(), "1-5");
  EXPECT_EQ(cases[59].level, 4);
  EXPECT_EQ(cases[60].mode, ActuationMode::passive_plus_active);
}

TEST(ParametricCases, FifteenContiguousBands) {
  std::set<std::pair<std::size_t, std::size_t>> bands;
  for (const auto& c : generate_cases()) {
    EXPECT_LE(c.first_row, c.last_row);
    EXPECT_LT(c.last_row, ActuatorGrid::rows);
    bands.insert({c.first_row, c.last_row});
  }
  EXPECT_EQ(bands.size(), 15u);
}

TEST(ParametricCases, ExpansionAndUniqueness) {
  std::set<ActuationPattern> seen;
  for (const auto& c : generate_cases()) {
    const ActuationPattern p = c.expand();
    EXPECT_TRUE(seen.insert(p).second) << c.rows_label();
    for (std::size_t r = 0; r < ActuatorGrid::rows; ++r) {
      const bool in_band = r >= c.first_row && r <= c.last_row;
      for (std::size_t col = 0; col < ActuatorGrid::columns; ++col) {
        EXPECT_EQ(p.height(r, col), in_band ? c.level : 0);
        EXPECT_EQ(p.active(r, col), in_band && c.mode == ActuationMode::passive_plus_active);
      }
    }
    EXPECT_EQ(effective_pattern(p).pattern(), p);
  }
}

TEST(ParametricCases, Labels) {
  ParametricCase c{0, 1, 2, 3, ActuationMode::passive_plus_active};
  EXPECT_EQ(c.rows_label(), "2-3");
  EXPECT_EQ(c.band_size(), 2u);
  EXPECT_EQ(to_string(c.mode), "passive+active");
  EXPECT_EQ(to_string(ActuationMode::passive_only), "passive");
}

TEST(ParametricStudy, BestCasesAndCosts) {
  SurrogatePlant plant(testing_support::default_config());
  const auto study = run_study(plant, 0);
  ASSERT_EQ(study.cases.size(), 120u);
  const auto& passive = study.cases[study.best_passive];
  const auto& active = study.cases[study.best_active];
  EXPECT_EQ(passive.spec.rows_label(), "2-3");
  EXPECT_EQ(passive.spec.level, 4);
  EXPECT_EQ(passive.spec.mode, ActuationMode::passive_only);
  EXPECT_NEAR(passive.ja_star, -0.43, 0.03);
  EXPECT_EQ(active.spec.rows_label(), "1-2");
  EXPECT_EQ(active.spec.level, 1);
  EXPECT_EQ(active.spec.mode, ActuationMode::passive_plus_active);
  EXPECT_NEAR(active.ja_star, -0.91, 0.03);
  EXPECT_LT(active.ja_star, passive.ja_star);

  const double positive = study.positive_fraction();
  EXPECT_GE(positive, 0.4);
  EXPECT_LE(positive, 0.6);
}

TEST(ParametricStudy, SecondaryCostsMatchPatterns) {
  SurrogatePlant plant(testing_support::noiseless_config());
  const auto study = run_study(plant, 0);
  for (const auto& r : study.cases) {
    const double share = static_cast<double>(r.spec.band_size()) / ActuatorGrid::rows;
    EXPECT_DOUBLE_EQ(r.jb_star, share * r.spec.level / kMaxHeightLevel);
    EXPECT_DOUBLE_EQ(r.jc_star, r.spec.mode == ActuationMode::passive_plus_active ? share : 0.0);
    EXPECT_DOUBLE_EQ(r.ja_star, testing_support::ja_star(plant, r.pattern));
  }
}

TEST(ParametricStudy, ReproducibleForSeed) {
  SurrogatePlant plant(testing_support::default_config());
  const auto a = run_study(plant, 5);
  const auto b = run_study(plant, 5);
  const auto c = run_study(plant, 6);
  bool differs = false;
  for (std::size_t i = 0; i < a.cases.size(); ++i) {
    EXPECT_EQ(a.cases[i].ja_star, b.cases[i].ja_star);
    differs |= a.cases[i].ja_star != c.cases[i].ja_star;
  }
  EXPECT_TRUE(differs);
}
