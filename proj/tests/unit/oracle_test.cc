#include <gtest/gtest.h>

#include "aktest/oracle.h"

namespace aktest {
namespace {

DiscreteGridDistribution Atoms(std::vector<std::pair<Point, double>> atoms) {
  return DiscreteGridDistribution::FromPoints(atoms);
}

TEST(AkDistanceBruteForce, LinePointMasses) {
  const auto p = Atoms({{{1.0}, 1.0}});
  const auto q = Atoms({{{2.0}, 1.0}});
  EXPECT_EQ(AkDistanceBruteForce(p, q, 1).value, 1.0);
  EXPECT_EQ(AkDistanceBruteForce(p, q, 2).value, 2.0);
}

TEST(AkDistanceBruteForce, FourAtomPlaneInstance) {
  const auto p = Atoms({{{1, 1}, 0.5}, {{2, 2}, 0.5}});
  const auto q = Atoms({{{1, 2}, 0.5}, {{2, 1}, 0.5}});
  const AkDistanceResult two = AkDistanceBruteForce(p, q, 2);
  EXPECT_EQ(two.value, 1.0);
  EXPECT_TRUE(two.family.disjoint);
  EXPECT_LE(two.family.rects.size(), 2u);
  double witnessed = 0.0;
  for (const auto& r : two.family.rects) witnessed += std::abs(MassOf(p, r) - MassOf(q, r));
  EXPECT_EQ(witnessed, 1.0);
  EXPECT_EQ(AkDistanceBruteForce(p, q, 4).value, 2.0);
}

TEST(AkDistanceBruteForce, EqualDistributionsGiveZero) {
  const auto p = Atoms({{{1, 1}, 0.25}, {{2, 3}, 0.75}});
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(AkDistanceBruteForce(p, p, k).value, 0.0);
}

TEST(AkDistanceBruteForce, CapsAreEnforced) {
  std::vector<std::pair<Point, double>> many;
  for (int i = 0; i < 13; ++i) many.push_back({{double(i)}, 1.0 / 13});
  const auto wide = Atoms(many);
  EXPECT_THROW(AkDistanceBruteForce(wide, wide, 2), InfeasibleError);
  const auto p = Atoms({{{1.0}, 1.0}});
  EXPECT_THROW(AkDistanceBruteForce(p, p, 5), InfeasibleError);
  EXPECT_THROW(AkDistanceBruteForce(p, p, 0), UsageError);
}

TEST(AkDistance1d, SingletonIntervalsGiveL1) {
  const auto p = Atoms({{{1.0}, 0.125}, {{2.0}, 0.5}, {{4.0}, 0.375}});
  const auto q = Atoms({{{1.0}, 0.5}, {{3.0}, 0.25}, {{4.0}, 0.25}});
  EXPECT_EQ(AkDistance1d(p, q, 4), L1Distance(p, q));
  EXPECT_EQ(L1Distance(p, q), 0.375 + 0.5 + 0.25 + 0.125);
}

TEST(AkDistance1d, NondecreasingInK) {
  const auto p = Atoms({{{1.0}, 0.25}, {{2.0}, 0.25}, {{3.0}, 0.25}, {{4.0}, 0.25}});
  const auto q = Atoms({{{1.0}, 0.5}, {{2.0}, 0.0625}, {{3.0}, 0.4375}});
  double prev = 0.0;
  for (int k = 1; k <= 6; ++k) {
    const double v = AkDistance1d(p, q, k);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(AkDistance1d, RequiresOneDimension) {
  const auto p = Atoms({{{1, 1}, 1.0}});
  EXPECT_THROW(AkDistance1d(p, p, 2), UsageError);
}

TEST(RandomPairDiscrepancy, EqualMeasuresGiveZero) {
  const auto p = Atoms({{{1, 1}, 0.5}, {{2, 3}, 0.5}});
  EXPECT_EQ(RandomPairDiscrepancy(p, p, AxisRectangle({0, 0}, {5, 5})), 0.0);
}

TEST(RandomPairDiscrepancy, OneSidedTwoPointExample) {
  // q(R) = 0 and p uniform on a, b: 1/4 * 1/2 + 1/4 * 1/2 + 1/2 * 1 = 0.75.
  const auto p = Atoms({{{1, 1}, 0.5}, {{2, 2}, 0.5}});
  const auto q = Atoms({{{5, 5}, 1.0}});
  EXPECT_DOUBLE_EQ(RandomPairDiscrepancy(p, q, AxisRectangle({0, 0}, {3, 3})), 0.75);
}

TEST(RandomPairDiscrepancy, ZeroRestrictedMassIsUsageError) {
  const auto p = Atoms({{{1, 1}, 1.0}});
  EXPECT_THROW(RandomPairDiscrepancy(p, p, AxisRectangle({3, 3}, {4, 4})), UsageError);
}

TEST(DiscrepancyDensity, FormulaValues) {
  const auto p = Atoms({{{0.0}, 0.2}, {{1.0}, 0.3}, {{5.0}, 0.5}});
  const auto q = Atoms({{{1.0}, 0.1}, {{3.0}, 0.2}, {{5.0}, 0.7}});
  EXPECT_DOUBLE_EQ(DiscrepancyDensity(p, q, AxisRectangle({0}, {0})), 2.0);
  EXPECT_DOUBLE_EQ(DiscrepancyDensity(p, q, AxisRectangle({1}, {1})), 1.0);
  EXPECT_DOUBLE_EQ(DiscrepancyDensity(p, p, AxisRectangle({0}, {5})), 0.0);
  EXPECT_THROW(DiscrepancyDensity(p, q, AxisRectangle({10}, {11})), UsageError);
}

TEST(ConstantMassBound, FormulaValues) {
  EXPECT_DOUBLE_EQ(ConstantMassBound(1), 1.0 / 27.0);
  EXPECT_DOUBLE_EQ(ConstantMassBound(2), 1.0 / 125.0);
  EXPECT_DOUBLE_EQ(ConstantMassBound(3), 1.0 / 4913.0);
  EXPECT_THROW(ConstantMassBound(4), UsageError);
  EXPECT_THROW(ConstantMassBound(0), UsageError);
}

TEST(PairBoxMassExpectation, PointMassIsOne) {
  EXPECT_EQ(PairBoxMassExpectation(Atoms({{{1, 1}, 1.0}})), 1.0);
}

}  // namespace
}  // namespace aktest
