#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "aktest/tester.h"

namespace aktest {
namespace {

TesterConfig Plain(int k, int d, double eps) {
  TesterConfig cfg;
  cfg.k = k;
  cfg.d = d;
  cfg.eps = eps;
  cfg.mode = TesterMode::kPractical;
  cfg.alpha_effective = 1.0;
  cfg.budget_constant = 1.0;
  cfg.kappa_constant = 1.0;
  return cfg;
}

DiscreteGridDistribution PointMass2d() {
  std::vector<std::pair<Point, double>> atom{{{0.0, 0.0}, 1.0}};
  return DiscreteGridDistribution::FromPoints(atom);
}

TEST(SampleBudget, DerivedValue) {
  // ceil(128^(6/7) * 7 * 2^(1/3)) = ceil(64 * 7 * 1.2599...) = 565.
  EXPECT_EQ(SampleBudget(Plain(128, 1, 1.0)), 565);
}

TEST(SampleBudget, DoublingKScalesByFormula) {
  for (int d = 1; d <= 3; ++d) {
    TesterConfig a = Plain(1 << 10, d, 0.5), b = Plain(1 << 11, d, 0.5);
    a.budget_constant = b.budget_constant = 1000.0;
    const double ratio = std::pow(2.0, 6.0 / 7.0) * std::pow(11.0 / 10.0, d);
    EXPECT_NEAR(static_cast<double>(SampleBudget(b)) / static_cast<double>(SampleBudget(a)), ratio,
                ratio * 2.0 / static_cast<double>(SampleBudget(a)));
  }
}

TEST(SampleBudget, UnitEpsContributesFactorOne) {
  TesterConfig paper = Plain(16, 2, 1.0);
  paper.mode = TesterMode::kPaper;
  EXPECT_EQ(SampleBudget(paper), SampleBudget(Plain(16, 2, 1.0)));
}

TEST(SampleBudget, OverflowIsReported) {
  TesterConfig cfg = Plain(16, 2, 0.5);
  cfg.mode = TesterMode::kPaper;  // alpha = 1024: eps^(-682) overflows
  EXPECT_THROW(SampleBudget(cfg), OverflowError);
}

TEST(Kappa, DerivedValue) {
  // 1 * (1/2) * 4^(-3) * 1 * 10^4 / 4096
  EXPECT_NEAR(Kappa(Plain(16, 1, 4.0), 100), 0.019073486328125, 1e-15);
}

TEST(Kappa, QuadraticInBudget) {
  const TesterConfig cfg = Plain(64, 2, 0.5);
  for (std::int64_t m : {1, 7, 100, 12345}) {
    EXPECT_DOUBLE_EQ(Kappa(cfg, 2 * m) / Kappa(cfg, m), 4.0);
    EXPECT_GT(Kappa(cfg, m), 0.0);
    EXPECT_NEAR(LogKappa(cfg, m), std::log(Kappa(cfg, m)), 1e-12);
  }
}

TEST(TesterConfig, PaperAlpha) {
  TesterConfig cfg = Plain(4, 1, 1.0);
  cfg.mode = TesterMode::kPaper;
  EXPECT_EQ(cfg.Alpha(), 16.0);
  cfg.d = 2;
  EXPECT_EQ(cfg.Alpha(), 1024.0);
  cfg.alpha_override = 3.0;
  EXPECT_EQ(cfg.Alpha(), 3.0);
}

TEST(TesterConfig, ValidateRejectsBadParameters) {
  EXPECT_THROW(Plain(1, 1, 1.0).Validate(), UsageError);
  EXPECT_THROW(Plain(4, 0, 1.0).Validate(), UsageError);
  EXPECT_THROW(Plain(4, 1, 0.0).Validate(), UsageError);
  EXPECT_THROW(Plain(4, 1, 2.5).Validate(), UsageError);
  TesterConfig cfg = Plain(4, 1, 1.0);
  cfg.budget_multiplier = -1.0;
  EXPECT_THROW(cfg.Validate(), UsageError);
  EXPECT_NO_THROW(Plain(4, 1, 1.0).Validate());
}

TEST(TesterConfig, PaperModeReportsShortfall) {
  TesterConfig cfg = Plain(16, 1, 1.0);
  cfg.mode = TesterMode::kPaper;
  EXPECT_FALSE(CheckConsistency(cfg).satisfied);
  try {
    cfg.Validate();
    FAIL() << "expected the consistency check to fail";
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("shortfall"), std::string::npos);
  }
}

TEST(TesterConfig, MinimalBudgetConstantIsTight) {
  TesterConfig cfg = Plain(16, 1, 1.0);
  cfg.mode = TesterMode::kPaper;
  const double c = MinimalBudgetConstant(cfg);
  ASSERT_TRUE(std::isfinite(c));
  cfg.budget_constant = c * 1.001;
  EXPECT_TRUE(CheckConsistency(cfg).satisfied);
  EXPECT_NO_THROW(cfg.Validate());
  cfg.budget_constant = c * 0.99;
  EXPECT_FALSE(CheckConsistency(cfg).satisfied);
}

TEST(TesterConfig, PaperAlphaInTwoDimensionsIsInfeasible) {
  TesterConfig cfg = Plain(16, 2, 1.0);
  cfg.mode = TesterMode::kPaper;
  EXPECT_TRUE(std::isinf(MinimalBudgetConstant(cfg)));
}

TEST(PracticalDefaults, FrozenConstants) {
  const TesterConfig cfg = PracticalDefaults(8, 2, 1.0);
  EXPECT_EQ(cfg.mode, TesterMode::kPractical);
  EXPECT_EQ(cfg.budget_constant, 1.5);
  EXPECT_EQ(cfg.kappa_constant, 1.5);
  EXPECT_EQ(cfg.alpha_effective, 1.0);
  EXPECT_EQ(cfg.s_multiplier, 1.0);
  EXPECT_EQ(cfg.budget_multiplier, 1.0);
  EXPECT_EQ(cfg.flatten.c_f, 2.0);
  EXPECT_EQ(cfg.flatten.robust.c_r, 4.0);
  EXPECT_EQ(cfg.flatten.robust.repetitions, 3);
}

TEST(AkClosenessTest, PointMassAtMaximalEpsAccepts) {
  const GridSampler p(PointMass2d());
  Rng rng(1);
  for (int t = 0; t < 5; ++t) {
    const TestVerdict v = AkClosenessTest(p, p, PracticalDefaults(4, 2, 2.0), rng);
    EXPECT_FALSE(v.rejected());
    EXPECT_EQ(v.rejected(), v.statistic >= v.threshold);
  }
}

TEST(AkClosenessTest, DeterministicForFixedSeed) {
  std::vector<std::pair<Point, double>> atoms{{{0, 0}, 0.5}, {{1, 2}, 0.25}, {{3, 1}, 0.25}};
  const GridSampler p(DiscreteGridDistribution::FromPoints(atoms));
  Rng a(11), b(11);
  const TestVerdict va = AkClosenessTest(p, p, PracticalDefaults(4, 2, 1.0), a);
  const TestVerdict vb = AkClosenessTest(p, p, PracticalDefaults(4, 2, 1.0), b);
  EXPECT_EQ(va.statistic, vb.statistic);
  EXPECT_EQ(va.samples_used, vb.samples_used);
}

TEST(AkClosenessTest, VerdictUnchangedByMonotoneAxisMaps) {
  std::vector<std::pair<Point, double>> atoms{{{0, 0}, 0.25}, {{1, 2}, 0.25}, {{3, 1}, 0.25}, {{2, 3}, 0.25}};
  std::vector<std::pair<Point, double>> other{{{0, 0}, 0.5}, {{1, 2}, 0.5}};
  auto p = std::make_shared<GridSampler>(DiscreteGridDistribution::FromPoints(atoms));
  auto q = std::make_shared<GridSampler>(DiscreteGridDistribution::FromPoints(other));
  const std::vector<MappedAccess::AxisMap> maps{[](double x) { return std::exp(3 * x) - 7; },
                                                [](double y) { return y * y * y + 0.5 * y; }};
  const MappedAccess pm(p, maps), qm(q, maps);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng a(seed), b(seed);
    const TestVerdict plain = AkClosenessTest(*p, *q, PracticalDefaults(4, 2, 1.0), a);
    const TestVerdict mapped = AkClosenessTest(pm, qm, PracticalDefaults(4, 2, 1.0), b);
    EXPECT_EQ(plain.decision, mapped.decision);
    EXPECT_EQ(plain.statistic, mapped.statistic);
    EXPECT_EQ(plain.samples_used, mapped.samples_used);
  }
}

TEST(AkClosenessTest, NonFiniteSamplesAreUsageError) {
  std::vector<std::pair<Point, double>> atom{{{1.0, 0.0}, 1.0}};
  auto base = std::make_shared<GridSampler>(DiscreteGridDistribution::FromPoints(atom));
  const std::vector<MappedAccess::AxisMap> maps{[](double) { return std::numeric_limits<double>::infinity(); },
                                                [](double y) { return y; }};
  const MappedAccess p(base, maps);
  Rng rng(1);
  EXPECT_THROW(AkClosenessTest(p, p, PracticalDefaults(4, 2, 1.0), rng), UsageError);
}

TEST(AkClosenessTest, DimensionMismatchIsUsageError) {
  const GridSampler p(PointMass2d());
  Rng rng(1);
  EXPECT_THROW(AkClosenessTest(p, p, PracticalDefaults(4, 3, 1.0), rng), UsageError);
}

TEST(TvHistogramTest, DelegatesWithDoubledEps) {
  std::vector<std::pair<Point, double>> atoms{{{0, 0}, 0.5}, {{1, 2}, 0.5}};
  const GridSampler p(DiscreteGridDistribution::FromPoints(atoms));
  TesterConfig tv = PracticalDefaults(4, 2, 0.4);
  TesterConfig ak = PracticalDefaults(4, 2, 0.8);
  Rng a(3), b(3);
  const TestVerdict vt = TvHistogramTest(p, p, tv, a);
  const TestVerdict va = AkClosenessTest(p, p, ak, b);
  EXPECT_EQ(vt.statistic, va.statistic);
  EXPECT_EQ(vt.samples_used, va.samples_used);
}

TEST(TvHistogramTest, LargeEpsStillRunsTheTester) {
  const GridSampler p(PointMass2d());
  Rng rng(4);
  const TestVerdict v = TvHistogramTest(p, p, PracticalDefaults(4, 2, 1.5), rng);
  EXPECT_GT(v.samples_used, 0);
  EXPECT_FALSE(v.rejected());
}

TEST(UnionVolume, OverlappingBoxes) {
  const std::vector<AxisRectangle> boxes{AxisRectangle({0, 0}, {0.5, 1}), AxisRectangle({0.25, 0}, {1, 0.5})};
  EXPECT_DOUBLE_EQ(UnionVolume(boxes), 0.5 + 0.375 - 0.125);
  EXPECT_EQ(UnionVolume({}), 0.0);
}

TEST(ReductionSentinel, FixedPoint) {
  EXPECT_EQ(ReductionSentinel(3), (Point{-1, -1, -1}));
}

TEST(ReductionSentinelMass, OneMinusClippedArea) {
  const RectangleUnionHypothesis h(2, {AxisRectangle({0, 0}, {0.5, 0.5}), AxisRectangle({0.25, 0.25}, {2, 0.5})});
  // Union inside the unit cube: [0,0.5]^2 plus [0.5,1]x[0.25,0.5].
  EXPECT_DOUBLE_EQ(ReductionSentinelMass(h), 1.0 - 0.25 - 0.125);
}

TEST(HypothesisReductionAccess, SentinelFrequencyMatchesMass) {
  auto h = std::make_shared<RectangleUnionHypothesis>(2, std::vector<AxisRectangle>{AxisRectangle({0, 0}, {0.5, 0.5})});
  const HypothesisReductionAccess access(h);
  Rng rng(5);
  Point x(2);
  int sentinel = 0;
  for (int t = 0; t < 10000; ++t) {
    access.Draw(rng, x);
    if (x == ReductionSentinel(2)) {
      ++sentinel;
    } else {
      EXPECT_TRUE(h->Label(x));
    }
  }
  EXPECT_NEAR(sentinel / 10000.0, 0.75, 0.02);
}

TEST(HypothesisEquivalenceTest, IdenticalHypothesesAccept) {
  auto h = std::make_shared<RectangleUnionHypothesis>(2, std::vector<AxisRectangle>{AxisRectangle({0, 0}, {0.5, 1})});
  Rng rng(6);
  int accepts = 0;
  for (int t = 0; t < 20; ++t) accepts += HypothesisEquivalenceTest(h, h, PracticalDefaults(2, 2, 1.0), rng).rejected() ? 0 : 1;
  EXPECT_GE(accepts / 20.0, 0.6);
}

TEST(HypothesisEquivalenceTest, OppositeHalvesReject) {
  auto left = std::make_shared<RectangleUnionHypothesis>(2, std::vector<AxisRectangle>{AxisRectangle({0, 0}, {0.5, 1})});
  auto right = std::make_shared<RectangleUnionHypothesis>(2, std::vector<AxisRectangle>{AxisRectangle({0.5, 0}, {1, 1})});
  TesterConfig cfg = PracticalDefaults(2, 2, 1.0);
  cfg.budget_multiplier = 4.0;
  Rng rng(7);
  int rejects = 0;
  for (int t = 0; t < 20; ++t) rejects += HypothesisEquivalenceTest(left, right, cfg, rng).rejected() ? 1 : 0;
  EXPECT_GE(rejects / 20.0, 0.6);
}

}  // namespace
}  // namespace aktest
