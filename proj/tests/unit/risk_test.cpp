#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "proxtrace/error.hpp"
#include "proxtrace/risk.hpp"

using namespace proxtrace;

namespace {

AreaObservation area_of(const std::vector<std::size_t>& cats, const std::vector<double>& dists,
                        double radius = 10.0) {
  AreaObservation a;
  a.radius_m = radius;
  for (std::size_t i = 0; i < cats.size(); ++i) a.observations.push_back({cats[i], dists[i], {}});
  return a;
}

const std::vector<double> kDefault{0.7, 0.2, 0.09, 0.01};

}  // namespace

TEST(WeightConfig, DefaultsMatchPublishedValues) {
  const auto w = WeightConfig::defaults();
  ASSERT_EQ(w.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(w[k], kDefault[k]);
}

TEST(WeightConfig, RejectsNonDescendingOrNonPositive) {
  EXPECT_THROW(WeightConfig({0.7, 0.7, 0.1}), Error);
  EXPECT_THROW(WeightConfig({0.2, 0.7}), Error);
  EXPECT_THROW(WeightConfig({0.7, 0.0}), Error);
  EXPECT_THROW(WeightConfig({}), Error);
  EXPECT_NO_THROW(WeightConfig({5.0}));
}

TEST(AssessArea, AllTopCategoryIsOne) {
  const auto s = assess_area(area_of(std::vector<std::size_t>(20, 0), std::vector<double>(20, 3.3)),
                             WeightConfig::defaults());
  EXPECT_EQ(s.value, 1.0);
}

TEST(AssessArea, AllDIsRatio) {
  const auto s = assess_area(area_of(std::vector<std::size_t>(20, 3), std::vector<double>(20, 7.0)),
                             WeightConfig::defaults());
  EXPECT_NEAR(s.value, 0.01 / 0.7, 1e-12);
  EXPECT_NEAR(s.value, 0.0142857, 1e-7);
}

TEST(AssessArea, HalfAHalfDAtEqualDistance) {
  std::vector<std::size_t> cats(10, 0);
  cats.insert(cats.end(), 10, 3);
  const auto s = assess_area(area_of(cats, std::vector<double>(20, 5.0)), WeightConfig::defaults());
  EXPECT_NEAR(s.value, (10 * 0.7 + 10 * 0.01) / (20 * 0.7), 1e-12);
  EXPECT_EQ(classify(s), RiskClass::C);
}

TEST(AssessArea, Errors) {
  const auto w = WeightConfig::defaults();
  try {
    assess_area(area_of({}, {}), w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_data);
  }
  EXPECT_THROW(assess_area(area_of({0}, {0.0}), w), Error);
  EXPECT_THROW(assess_area(area_of({0}, {-1.0}), w), Error);
  EXPECT_THROW(assess_area(area_of({0}, {11.0}), w), Error);
  EXPECT_THROW(assess_area(area_of({4}, {1.0}), w), Error);
}

TEST(AssessArea, MatchesFormulaOracleOnRandomInputs) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> n(1, 40), cat(0, 3);
  std::uniform_real_distribution<double> d(0.01, 10.0);
  const auto w = WeightConfig::defaults();
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::size_t> cats(n(rng));
    std::vector<double> dists(cats.size());
    for (std::size_t i = 0; i < cats.size(); ++i) {
      cats[i] = cat(rng);
      dists[i] = d(rng);
    }
    const double got = assess_area(area_of(cats, dists), w).value;
    EXPECT_NEAR(got, oracle::area_score(cats, dists, kDefault), 1e-12);
    EXPECT_GE(got, 0.01 / 0.7 - 1e-12);
    EXPECT_LE(got, 1.0);
  }
}

TEST(AssessArea, ScaleInvariant) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> cat(0, 3);
  std::uniform_real_distribution<double> d(0.1, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> cats(12);
    std::vector<double> dists(12), scaled(12);
    for (std::size_t i = 0; i < 12; ++i) {
      cats[i] = cat(rng);
      dists[i] = d(rng);
      scaled[i] = dists[i] * 9.5;
    }
    EXPECT_NEAR(assess_area(area_of(cats, dists), WeightConfig::defaults()).value,
                assess_area(area_of(cats, scaled), WeightConfig::defaults()).value, 1e-12);
  }
}

TEST(AssessArea, PromotingOneObservationRaisesScore) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> cat(1, 3);
  std::uniform_real_distribution<double> d(0.1, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::size_t> cats(8);
    std::vector<double> dists(8);
    for (std::size_t i = 0; i < 8; ++i) {
      cats[i] = cat(rng);
      dists[i] = d(rng);
    }
    const double before = assess_area(area_of(cats, dists), WeightConfig::defaults()).value;
    cats[trial % 8] -= 1;
    const double after = assess_area(area_of(cats, dists), WeightConfig::defaults()).value;
    EXPECT_GT(after, before);
  }
}

TEST(AssessArea, GeneralisedCategoryCount) {
  const WeightConfig w({1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125});
  const auto s = assess_area(area_of({5, 5}, {1.0, 9.0}), w);
  EXPECT_NEAR(s.value, 0.03125, 1e-15);
}

TEST(Classify, TableBoundaries) {
  const std::vector<std::pair<double, RiskClass>> cases{
      {0.0, RiskClass::A}, {0.2, RiskClass::A}, {0.2 + 1e-9, RiskClass::B}, {0.4, RiskClass::B},
      {0.6, RiskClass::C}, {0.8, RiskClass::D}, {1.0, RiskClass::E},     {0.5071428, RiskClass::C},
  };
  for (const auto& [v, c] : cases) EXPECT_EQ(classify(RiskScore{v}), c) << v;
}

TEST(Classify, OutOfRange) {
  for (double v : {-1e-12, 1.0 + 1e-12, std::nan("")}) {
    try {
      classify(RiskScore{v});
      FAIL() << v;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::out_of_range);
    }
  }
}

TEST(RiskClass, Labels) {
  EXPECT_EQ(label(RiskClass::A), "Very Low");
  EXPECT_EQ(label(RiskClass::C), "Medium");
  EXPECT_EQ(label(RiskClass::E), "Very High");
  EXPECT_EQ(letter(RiskClass::D), 'D');
}
