#include <gtest/gtest.h>

#include <cmath>

#include "aktest/hardness.h"
#include "aktest/oracle.h"

namespace aktest {
namespace {

SquareEdgeGadget Unit(GadgetVariant v) { return {0.0, 0.0, 1.0, v}; }

TEST(GadgetSample, TPutsHalfOnUpperLeft) {
  const SquareEdgeGadget g = Unit(GadgetVariant::kT);
  Rng rng(1);
  int upper_left = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Point x = GadgetSample(g, rng);
    upper_left += EdgeOf(g, x) == DiamondEdge::kUpperLeft ? 1 : 0;
  }
  EXPECT_NEAR(upper_left / double(n), 0.5, 0.01);
}

TEST(GadgetSample, SamplesLieOnTheDiamond) {
  const SquareEdgeGadget g{3.5, -2.0, 0.75, GadgetVariant::kMix};
  Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    const Point x = GadgetSample(g, rng);
    EXPECT_NEAR(std::abs(x[0] - g.cx) + std::abs(x[1] - g.cy), g.radius, 1e-12);
  }
}

TEST(GadgetSample, MixSpreadsEvenlyOverEdges) {
  const SquareEdgeGadget g = Unit(GadgetVariant::kMix);
  Rng rng(3);
  std::array<int, 4> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<int>(EdgeOf(g, GadgetSample(g, rng)))];
  for (int c : counts) EXPECT_NEAR(c / double(n), 0.25, 0.01);
}

TEST(GadgetQuadrantMass, UpperRightEdgePoint) {
  const Point a{0.5, 0.5};
  EXPECT_EQ(GadgetQuadrantMass(Unit(GadgetVariant::kT), a, 1), 0.0);
  EXPECT_EQ(GadgetQuadrantMass(Unit(GadgetVariant::kR), a, 1), 0.0);
}

TEST(GadgetQuadrantMass, TopVertexLowerLeftQuadrant) {
  const Point top{0.0, 1.0};
  EXPECT_NEAR(GadgetQuadrantMass(Unit(GadgetVariant::kT), top, 2), 0.5, 1e-15);
  EXPECT_NEAR(GadgetQuadrantMass(Unit(GadgetVariant::kR), top, 2), 0.5, 1e-15);
}

TEST(GadgetQuadrantMass, OffSupportIsUsageError) {
  EXPECT_THROW(GadgetQuadrantMass(Unit(GadgetVariant::kT), Point{0.1, 0.1}, 1), UsageError);
  EXPECT_THROW(GadgetQuadrantMass(Unit(GadgetVariant::kT), Point{0.0, 1.0}, 5), UsageError);
}

TEST(GadgetQuadrantMass, MatchesMonteCarlo) {
  const Point a{-0.3, 0.7};
  for (GadgetVariant v : {GadgetVariant::kT, GadgetVariant::kR}) {
    const SquareEdgeGadget g = Unit(v);
    Rng rng(4);
    std::array<double, 5> counts{};
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const Point x = GadgetSample(g, rng);
      if (x[0] > a[0] && x[1] > a[1]) counts[1] += 1;
      if (x[0] < a[0] && x[1] < a[1]) counts[2] += 1;
      if (x[0] > a[0] && x[1] < a[1]) counts[3] += 1;
      if (x[0] < a[0] && x[1] > a[1]) counts[4] += 1;
    }
    for (int quadrant = 1; quadrant <= 4; ++quadrant) {
      const double exact = GadgetQuadrantMass(g, a, quadrant);
      const double sigma = std::sqrt(std::max(exact * (1 - exact), 1e-12) / n);
      EXPECT_NEAR(counts[quadrant] / n, exact, 4 * sigma + 1e-9) << ToString(v) << " quadrant " << quadrant;
    }
  }
}

TEST(MakeOrderTuple, SingleSample) {
  const std::vector<LabeledSample> s{{{0.3, 0.9}, Label::kQ}};
  const OrderTuple t = MakeOrderTuple(s);
  EXPECT_EQ(t.sigma_x, (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(t.sigma_y, (std::vector<std::uint32_t>{1}));
  EXPECT_EQ(t.labels, (std::vector<Label>{Label::kQ}));
}

TEST(MakeOrderTuple, TwoSamples) {
  const std::vector<LabeledSample> s{{{1, 5}, Label::kP}, {{3, 2}, Label::kQ}};
  const OrderTuple t = MakeOrderTuple(s);
  EXPECT_EQ(t.sigma_x, (std::vector<std::uint32_t>{1, 2}));
  EXPECT_EQ(t.sigma_y, (std::vector<std::uint32_t>{2, 1}));
  EXPECT_EQ(t.labels, (std::vector<Label>{Label::kP, Label::kQ}));
}

TEST(MakeOrderTuple, TiesAreUsageError) {
  const std::vector<LabeledSample> s{{{1, 5}, Label::kP}, {{1, 2}, Label::kQ}};
  EXPECT_THROW(MakeOrderTuple(s), UsageError);
}

TEST(MakeOrderTuple, InvariantUnderMonotoneMaps) {
  const std::vector<LabeledSample> s{{{0.1, 0.8}, Label::kP}, {{0.7, 0.2}, Label::kQ}, {{0.4, 0.5}, Label::kP}};
  std::vector<LabeledSample> mapped = s;
  for (auto& x : mapped) x.point = {std::exp(10 * x.point[0]), std::log(x.point[1]) - 3};
  EXPECT_EQ(MakeOrderTuple(s), MakeOrderTuple(mapped));
}

TEST(OrderTupleCode, CodesFillTheCellRange) {
  EXPECT_EQ(OrderTupleCellCount(1), 2u);
  EXPECT_EQ(OrderTupleCellCount(3), 288u);
  Rng rng(5);
  const auto t = Unit(GadgetVariant::kT), r = Unit(GadgetVariant::kR);
  std::vector<bool> seen(OrderTupleCellCount(2), false);
  for (int i = 0; i < 20000; ++i) {
    const std::uint64_t code = OrderTupleCode(SampleOrderTuple(t, r, 2, rng));
    ASSERT_LT(code, seen.size());
    seen[code] = true;
  }
  int hit = 0;
  for (bool b : seen) hit += b ? 1 : 0;
  EXPECT_GT(hit, 8);
}

TEST(OrderTupleDistributionDistance, SingleSampleExactlyMatches) {
  Rng rng(6);
  const OrderTupleTvEstimate est = OrderTupleDistributionDistance(1, 200000, rng);
  EXPECT_LE(std::abs(est.estimate), 3 * est.standard_error);
}

TEST(GenHardInstance, ParameterChecks) {
  EXPECT_THROW(GenHardInstance(8, 4.0, 1.0, false, 1), UsageError);
  EXPECT_THROW(GenHardInstance(8, 0.0, 1.0, false, 1), UsageError);
  EXPECT_THROW(GenHardInstance(8, 1.0, 1.5, false, 1), UsageError);
  EXPECT_THROW(GenHardInstance(8, 1.0, 0.0, false, 1), UsageError);
}

TEST(GenHardInstance, MassAccountingIsExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const HardInstance inst = GenHardInstance(64, 4.0, 0.5, seed % 2 == 0, seed);
    EXPECT_EQ(inst.r, 8);
    EXPECT_EQ(inst.HeavyCount() + inst.LightCount(), inst.r);
    EXPECT_DOUBLE_EQ(inst.TotalMass(), inst.HeavyCount() / 4.0 + inst.LightCount() * 0.5 / 64);
    double p_mass = 0.0;
    for (const auto& g : inst.PSide()) p_mass += g.mass;
    EXPECT_DOUBLE_EQ(p_mass, inst.TotalMass());
  }
}

TEST(GenHardInstance, HeavyFrequencyMatchesProbability) {
  double heavy = 0.0, squares = 0.0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const HardInstance inst = GenHardInstance(64, 8.0, 1.0, false, seed);
    heavy += inst.HeavyCount();
    squares += inst.r;
  }
  const double p = 8.0 / 64.0;
  EXPECT_NEAR(heavy / squares, p, 4 * std::sqrt(p * (1 - p) / squares));
}

TEST(GenHardInstance, EqualCaseSidesAreIdentical) {
  const HardInstance inst = GenHardInstance(64, 4.0, 1.0, true, 3);
  EXPECT_EQ(DiscretizeSide(inst.PSide(), 8), DiscretizeSide(inst.QSide(), 8));
  EXPECT_EQ(inst.PlantedDiscrepancy(), 0.0);
}

TEST(GenHardInstance, FarCaseGadgetAssignment) {
  const HardInstance inst = GenHardInstance(64, 4.0, 1.0, false, 4);
  const auto p = inst.PSide(), q = inst.QSide();
  for (int i = 0; i < inst.r; ++i) {
    if (inst.squares[i].heavy) {
      EXPECT_EQ(p[i].gadget.variant, GadgetVariant::kMix);
      EXPECT_EQ(q[i].gadget.variant, GadgetVariant::kMix);
      EXPECT_EQ(p[i].mass, 0.25);
    } else {
      EXPECT_NE(p[i].gadget.variant, GadgetVariant::kMix);
      EXPECT_NE(p[i].gadget.variant, q[i].gadget.variant);
      EXPECT_EQ(p[i].mass, 1.0 / 64);
    }
  }
}

TEST(GenHardInstance, PlantedDiscrepancyMatchesDiscretizedMasses) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const HardInstance inst = GenHardInstance(64, 4.0, 1.0, false, seed);
    const auto p = DiscretizeSide(inst.PSide(), 8), q = DiscretizeSide(inst.QSide(), 8);
    double sum = 0.0;
    for (const auto& rect : inst.PlantedRectangles()) {
      sum += std::abs(MassOf(p, rect) / p.TotalMass() - MassOf(q, rect) / q.TotalMass());
    }
    EXPECT_NEAR(sum, inst.PlantedDiscrepancy(), 1e-12);
    EXPECT_NEAR(inst.PlantedDiscrepancy(), inst.LightCount() * 2.0 * inst.eps / inst.k / inst.TotalMass(), 1e-12);
    EXPECT_LE(inst.PlantedRectangles().size(), static_cast<std::size_t>(inst.k));
  }
}

TEST(MonotoneMap, StrictlyIncreasing) {
  Rng rng(7);
  for (int map = 0; map < 5; ++map) {
    const MonotoneMap f = SampleMonotoneMap(1e6, rng);
    for (int i = 0; i < 1000; ++i) {
      double x = Uniform01(rng), y = Uniform01(rng);
      if (x == y) continue;
      if (x > y) std::swap(x, y);
      // The additive shift can swamp the x-dependent term beyond any fixed precision,
      // so the output is only non-decreasing while the exponent is strictly increasing.
      EXPECT_LT(x * std::exp(f.lambda1) + f.lambda2, y * std::exp(f.lambda1) + f.lambda2);
      EXPECT_LE(f.LogApply(x), f.LogApply(y));
      EXPECT_LE(f.PreciseApply(x), f.PreciseApply(y));
    }
  }
}

TEST(MonotoneMap, ValueAtZero) {
  Rng rng(8);
  const MonotoneMap f = SampleMonotoneMap(30.0, rng);
  EXPECT_DOUBLE_EQ(f.Apply(0.0), std::exp(f.lambda2) + f.Lambda3());
}

TEST(MonotoneMap, ParameterRanges) {
  Rng rng(9);
  const double w = 1e6, lw = std::log(w), llw = std::log(lw);
  for (int i = 0; i < 1000; ++i) {
    const MonotoneMap f = SampleMonotoneMap(w, rng);
    EXPECT_GE(f.lambda1, llw);
    EXPECT_LE(f.lambda1, 2 * llw);
    EXPECT_GE(f.lambda2, 0.0);
    EXPECT_LE(f.lambda2, lw * lw * lw);
    EXPECT_LE(f.log_lambda3, 2 * lw * lw * lw);
  }
}

TEST(MonotoneMap, SmallScaleAndOverflowAreReported) {
  Rng rng(10);
  EXPECT_THROW(SampleMonotoneMap(std::exp(std::exp(1.0)), rng), UsageError);
  const MonotoneMap f = SampleMonotoneMap(1e12, rng);
  EXPECT_THROW(f.Apply(1.0), OverflowError);
}

TEST(TripleObfuscation, DistanceShrinksAsScaleGrows) {
  const std::array<double, 3> first{0.05, 0.47, 0.92}, second{0.02, 0.49, 0.98};
  std::vector<double> tv;
  for (double w : {1e3, 1e6, 1e12}) {
    double sum = 0.0;
    for (std::uint64_t r = 0; r < 3; ++r) {
      Rng rng(100 + r);
      sum += TripleObfuscationTv(w, first, second, 200000, rng);
    }
    tv.push_back(sum / 3);
  }
  EXPECT_GT(tv[0], tv[1]);
  EXPECT_GT(tv[1], tv[2]);
}

}  // namespace
}  // namespace aktest
