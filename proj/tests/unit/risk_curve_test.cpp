#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "proxtrace/error.hpp"
#include "proxtrace/risk_curve.hpp"

using namespace proxtrace;

TEST(RiskCurve, Endpoints) {
  const auto curve = risk_curve(20, WeightConfig::defaults(), Placement::uniform(), {1, 20, 1});
  ASSERT_EQ(curve.size(), 10626u);
  EXPECT_EQ(curve.front().index, 1u);
  EXPECT_EQ(curve.front().distribution.cardinalities, (std::vector<std::uint32_t>{20, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(*curve.front().mean_score, 1.0);
  EXPECT_FALSE(curve.back().mean_score.has_value());
  const auto& last_d = curve[curve.size() - 2];
  EXPECT_EQ(last_d.distribution.cardinalities, (std::vector<std::uint32_t>{0, 0, 0, 1}));
  EXPECT_NEAR(*last_d.mean_score, 0.01 / 0.7, 1e-12);
}

TEST(RiskCurve, SingleCategoryPointsCancelDistances) {
  const auto curve = risk_curve(6, WeightConfig::defaults(), Placement::uniform(), {3, 10, 1});
  for (const auto& p : curve) {
    std::size_t nonzero = 0, which = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      if (p.distribution.cardinalities[k]) ++nonzero, which = k;
    }
    if (nonzero != 1) continue;
    EXPECT_NEAR(*p.mean_score, WeightConfig::defaults()[which] / 0.7, 1e-12);
  }
}

TEST(RiskCurve, ThreadCountDoesNotChangeOutput) {
  const auto w = WeightConfig::defaults();
  std::stringstream a, b;
  write_curve_csv(a, risk_curve(10, w, Placement::uniform(), {42, 15, 1}), 4);
  write_curve_csv(b, risk_curve(10, w, Placement::uniform(), {42, 15, 7}), 4);
  EXPECT_EQ(a.str(), b.str());
}

TEST(RiskCurve, SeedChangesUniformOutput) {
  const auto w = WeightConfig::defaults();
  const auto a = risk_curve(4, w, Placement::uniform(), {1, 5, 1});
  const auto b = risk_curve(4, w, Placement::uniform(), {2, 5, 1});
  bool differ = false;
  for (std::size_t i = 0; i < a.size(); ++i) differ |= a[i].mean_score != b[i].mean_score;
  EXPECT_TRUE(differ);
}

TEST(RiskCurve, ShiftingMassDownwardNeverRaisesScoreAtEqualDistance) {
  const auto curve = risk_curve(8, WeightConfig::defaults(), Placement::fixed(4.0), {0, 1, 1});
  std::map<std::vector<std::uint32_t>, double> score;
  for (const auto& p : curve) {
    if (p.mean_score) score[p.distribution.cardinalities] = *p.mean_score;
  }
  for (const auto& [dist, s] : score) {
    for (std::size_t k = 0; k + 1 < dist.size(); ++k) {
      if (dist[k] == 0) continue;
      auto moved = dist;
      --moved[k];
      ++moved[k + 1];
      EXPECT_LE(score.at(moved), s + 1e-12);
    }
  }
}

TEST(RiskSurface, CellsAndIdentities) {
  const auto w = WeightConfig::defaults();
  const auto cells = risk_surface(10, w, Placement::uniform(), {5, 10, 2});
  EXPECT_EQ(cells.size(), 66u);  // triangle n_A + n_B <= 10
  for (const auto& c : cells) {
    EXPECT_LE(c.n_a + c.n_b, 10u);
    if (c.n_a == 0 && c.n_b == 0) { EXPECT_FALSE(c.mean_score); }
    if (c.n_a > 0 && c.n_b == 0) { EXPECT_DOUBLE_EQ(*c.mean_score, 1.0); }
    if (c.n_a == 0 && c.n_b > 0) { EXPECT_NEAR(*c.mean_score, 0.2 / 0.7, 1e-12); }
  }
}

TEST(RiskSurface, MonotoneInNaAlongDiagonalsAtEqualDistance) {
  const auto cells = risk_surface(12, WeightConfig::defaults(), Placement::fixed(2.0), {0, 1, 1});
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> s;
  for (const auto& c : cells) {
    if (c.mean_score) s[{c.n_a, c.n_b}] = *c.mean_score;
  }
  for (std::uint32_t total = 1; total <= 12; ++total) {
    for (std::uint32_t a = 0; a < total; ++a) {
      EXPECT_LE(s.at({a, total - a}), s.at({a + 1, total - a - 1}));
    }
  }
}

TEST(RiskCurve, CsvSchema) {
  std::stringstream out;
  write_curve_csv(out, risk_curve(1, WeightConfig::defaults(), Placement::fixed(1.0), {0, 1, 1}), 4);
  EXPECT_EQ(out.str(),
            "index,n_A,n_B,n_C,n_D,mean_score,class\n"
            "1,1,0,0,0,1.000000000,E\n"
            "2,0,1,0,0,0.285714286,B\n"
            "3,0,0,1,0,0.128571429,A\n"
            "4,0,0,0,1,0.014285714,A\n"
            "5,0,0,0,0,,-\n");
}

TEST(Placement, Validation) {
  const auto w = WeightConfig::defaults();
  EXPECT_THROW(risk_curve(2, w, Placement::fixed(11.0), {}), Error);
  EXPECT_THROW(risk_curve(2, w, Placement::uniform(10.0, 10.0), {}), Error);
}
