#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "aktest/flatten_l2.h"

namespace aktest {
namespace {

ElementAccess Categorical(std::vector<double> w) {
  std::vector<double> cdf(w.size());
  std::partial_sum(w.begin(), w.end(), cdf.begin());
  return [cdf](Rng& rng) -> std::uint64_t {
    const double u = Uniform01(rng) * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::uint64_t>(cdf.size() - 1, static_cast<std::uint64_t>(it - cdf.begin()));
  };
}

TEST(BuildSplitMap, Multiplicities) {
  const std::vector<std::uint64_t> one{0};
  const SplitMap a = BuildSplitMap(one, 2);
  EXPECT_EQ(a.Multiplicity(0), 2u);
  EXPECT_EQ(a.Multiplicity(1), 1u);

  const SplitMap empty = BuildSplitMap({}, 4);
  for (std::uint64_t i = 0; i < 4; ++i) EXPECT_EQ(empty.Multiplicity(i), 1u);
  EXPECT_EQ(empty.SplitDomainSize(), 4u);

  const std::vector<std::uint64_t> twice{1, 1};
  const SplitMap b = BuildSplitMap(twice, 3);
  EXPECT_EQ(b.Multiplicity(0), 1u);
  EXPECT_EQ(b.Multiplicity(1), 3u);
  EXPECT_EQ(b.Multiplicity(2), 1u);
  EXPECT_EQ(b.SplitDomainSize(), 5u);
}

TEST(BuildSplitMap, OutOfRangeElementIsUsageError) {
  const std::vector<std::uint64_t> bad{3};
  EXPECT_THROW(BuildSplitMap(bad, 3), UsageError);
}

TEST(SplitSample, SingleCopyIsFixed) {
  const SplitMap map = BuildSplitMap({}, 2);
  Rng rng(1);
  for (int t = 0; t < 100; ++t) EXPECT_EQ(SplitSample(map, 1, rng), (SplitElement{1, 1}));
}

TEST(SplitSample, TwoCopiesSplitEvenly) {
  const std::vector<std::uint64_t> s{0};
  const SplitMap map = BuildSplitMap(s, 1);
  Rng rng(2);
  int first = 0;
  for (int t = 0; t < 10000; ++t) first += SplitSample(map, 0, rng).part == 1 ? 1 : 0;
  EXPECT_NEAR(first / 10000.0, 0.5, 0.02);
}

TEST(SplitPushforward, DefinitionExample) {
  const std::vector<std::uint64_t> s{0};
  const std::vector<double> d{0.5, 0.5};
  EXPECT_EQ(SplitPushforward(BuildSplitMap(s, 2), d), (std::vector<double>{0.25, 0.25, 0.5}));
}

TEST(SplitPushforward, DisjointSupportsKeepL1DistanceTwo) {
  const std::vector<std::uint64_t> s{0, 0, 1};
  const SplitMap map = BuildSplitMap(s, 2);
  const std::vector<double> p{1, 0}, q{0, 1};
  const auto ps = SplitPushforward(map, p), qs = SplitPushforward(map, q);
  double l1 = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) l1 += std::abs(ps[i] - qs[i]);
  EXPECT_EQ(l1, 2.0);
}

TEST(SplitPushforward, NormDoesNotGrow) {
  const std::vector<double> p{0.5, 0.25, 0.125, 0.125};
  const std::vector<std::uint64_t> s{0, 0, 2};
  double before = 0.0, after = 0.0;
  for (double x : p) before += x * x;
  for (double x : SplitPushforward(BuildSplitMap(s, 4), p)) after += x * x;
  EXPECT_LE(after, before);
}

TEST(L2CollisionStatistic, Arithmetic) {
  const std::vector<std::int64_t> x1{2, 0}, y1{0, 2};
  EXPECT_EQ(L2CollisionStatistic(MakeCountVector(x1, y1)), 4.0);
  const std::vector<std::int64_t> x2{1, 1}, y2{1, 1};
  EXPECT_EQ(L2CollisionStatistic(MakeCountVector(x2, y2)), -4.0);
}

TEST(L2CollisionStatistic, UnbiasedOnDisjointPointMasses) {
  Rng rng(3);
  const int trials = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::vector<std::int64_t> x{PoissonDraw(20.0, rng), 0};
    const std::vector<std::int64_t> y{0, PoissonDraw(20.0, rng)};
    const double z = L2CollisionStatistic(MakeCountVector(x, y));
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sumsq / trials - mean * mean) / trials);
  EXPECT_NEAR(mean, 800.0, 3 * se);
}

TEST(PlanRobustL2, BudgetAndThreshold) {
  const RobustL2Plan plan = PlanRobustL2(0.01, 0.1, RobustL2Options{});
  EXPECT_EQ(plan.m, 40);  // ceil(4 * 0.1 / 0.01)
  EXPECT_DOUBLE_EQ(plan.threshold, 40.0 * 40.0 * 0.01 / 2.0);
  EXPECT_THROW(PlanRobustL2(0.0, 0.1, RobustL2Options{}), UsageError);
}

TEST(RobustL2Test, AcceptsEqualUniforms) {
  const auto p = Categorical(std::vector<double>(100, 0.01));
  Rng rng(4);
  int accepts = 0;
  for (int t = 0; t < 400; ++t) accepts += RobustL2Test(p, p, 0.01, 0.1, RobustL2Options{}, rng).rejected() ? 0 : 1;
  EXPECT_GE(accepts / 400.0, 0.70);
}

TEST(RobustL2Test, RejectsDisjointPointMasses) {
  const auto p = Categorical({1.0, 0.0});
  const auto q = Categorical({0.0, 1.0});
  Rng rng(5);
  int rejects = 0;
  for (int t = 0; t < 400; ++t) rejects += RobustL2Test(p, q, 1.0, 0.5, RobustL2Options{}, rng).rejected() ? 1 : 0;
  EXPECT_GE(rejects / 400.0, 0.70);
}

TEST(RobustL2Test, AcceptsEqualAtSmallestBudget) {
  const auto p = Categorical({0.5, 0.5});
  // m = ceil(4 * sqrt(0.5) / 4) = 1 and threshold = 2.
  EXPECT_EQ(PlanRobustL2(0.5, 2.0, RobustL2Options{}).m, 1);
  Rng rng(6);
  int accepts = 0;
  for (int t = 0; t < 400; ++t) accepts += RobustL2Test(p, p, 0.5, 2.0, RobustL2Options{}, rng).rejected() ? 0 : 1;
  EXPECT_GE(accepts / 400.0, 0.70);
}

TEST(PlanFlatten, DerivedBudget) {
  const FlattenPlan plan = PlanFlatten(10000, 0.1, FlattenOptions{});
  // m0 = min(floor(10^4/100), ceil(2 * 0.1^(-4/3))) = min(100, 44).
  EXPECT_EQ(plan.flatten_m, 44);
  EXPECT_DOUBLE_EQ(plan.b, 40.0 / 44.0);
  EXPECT_DOUBLE_EQ(plan.robust_eps, 0.1 / std::sqrt(3.0));
  // ceil(4 sqrt(40/44) / (0.01/3)) = ceil(1144.155...)
  EXPECT_EQ(plan.robust.m, 1145);
  EXPECT_THROW(PlanFlatten(0, 0.1, FlattenOptions{}), UsageError);
}

TEST(PlanFlatten, SmallSupportFallsBackToUnitBound) {
  const FlattenPlan plan = PlanFlatten(50, 0.1, FlattenOptions{});
  EXPECT_EQ(plan.flatten_m, 0);
  EXPECT_EQ(plan.b, 1.0);
}

TEST(FlattenCloseness, AcceptsEqualUniforms) {
  const auto p = Categorical(std::vector<double>(10000, 1e-4));
  Rng rng(7);
  int accepts = 0;
  for (int t = 0; t < 200; ++t) {
    accepts += FlattenCloseness(p, p, 10000, 0.1, FlattenOptions{}, rng).rejected() ? 0 : 1;
  }
  EXPECT_GE(accepts / 200.0, 0.8);
}

TEST(FlattenCloseness, RejectsPlantedLightDiscrepancy) {
  // 100 elements of mass 1/100 under (p + q)/2 with p_i - q_i = +-1/100:
  // sum (p_i - q_i)^2 = 0.01 = eps^2.
  std::vector<double> p(100), q(100);
  for (int i = 0; i < 100; ++i) {
    p[i] = (i % 2 == 0 ? 1.5 : 0.5) / 100.0;
    q[i] = (i % 2 == 0 ? 0.5 : 1.5) / 100.0;
  }
  const auto pa = Categorical(p), qa = Categorical(q);
  Rng rng(8);
  int rejects = 0;
  for (int t = 0; t < 200; ++t) rejects += FlattenCloseness(pa, qa, 100, 0.1, FlattenOptions{}, rng).rejected() ? 1 : 0;
  EXPECT_GE(rejects / 200.0, 0.8);
}

}  // namespace
}  // namespace aktest
