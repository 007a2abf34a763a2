#ifndef AKTEST_HARDNESS_H_
#define AKTEST_HARDNESS_H_

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "aktest/common.h"
#include "aktest/distributions.h"

namespace aktest {

// ---------------------------------------------------------------------------
// Square-edge gadgets.
//
// A square with axis-parallel diagonals: vertices center +- radius e_x and
// center +- radius e_y. T is uniform on the upper-left and lower-right edges,
// R on the upper-right and lower-left edges, MIX = (T + R) / 2.

enum class GadgetVariant { kT, kR, kMix };

std::string_view ToString(GadgetVariant variant);

enum class DiamondEdge { kUpperLeft = 0, kUpperRight = 1, kLowerLeft = 2, kLowerRight = 3 };

struct SquareEdgeGadget {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 1.0;
  GadgetVariant variant = GadgetVariant::kMix;

  // Endpoints of an edge, listed from the left vertex to the right vertex.
  std::array<Point, 2> Edge(DiamondEdge edge) const;
  // Mass the variant puts on an edge: 1/2, 0 or 1/4.
  double EdgeWeight(DiamondEdge edge) const;
  bool OnSupport(double x, double y, double tolerance = 1e-9) const;
};

// Arc-length uniform point on the variant's edges. Throws on radius <= 0.
Point GadgetSample(const SquareEdgeGadget& gadget, Rng& rng);

// The variant's edge that produced a point (by quadrant around the center).
DiamondEdge EdgeOf(const SquareEdgeGadget& gadget, std::span<const double> point);

// Open quadrants around a = (a_x, a_y):
//   1: x > a_x, y > a_y    2: x < a_x, y < a_y
//   3: x > a_x, y < a_y    4: x < a_x, y > a_y
// Mass under the variant, from the exact parameter intervals on each edge.
// Throws UsageError unless `a` lies on the diamond (within 1e-9).
double GadgetQuadrantMass(const SquareEdgeGadget& gadget, std::span<const double> a, int quadrant);

// Same computation for any corner point `a`, on the support or not.
double GadgetRegionMass(const SquareEdgeGadget& gadget, std::span<const double> a, int quadrant);

// ---------------------------------------------------------------------------
// Order tuples.

struct OrderTuple {
  std::vector<std::uint32_t> sigma_x;  // 1-based rank of each sample's x
  std::vector<std::uint32_t> sigma_y;
  std::vector<Label> labels;
  friend bool operator==(const OrderTuple&, const OrderTuple&) = default;
};

// 1-based ranks of `values`; throws UsageError on ties.
template <typename T>
std::vector<std::uint32_t> StrictRanks(std::span<const T> values) {
  std::vector<std::uint32_t> order(values.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return values[a] < values[b]; });
  std::vector<std::uint32_t> rank(values.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (r > 0 && !(values[order[r - 1]] < values[order[r]])) {
      throw UsageError("order tuple: tied coordinates");
    }
    rank[order[r]] = static_cast<std::uint32_t>(r + 1);
  }
  return rank;
}

// Two-dimensional samples only. Throws UsageError on tied coordinates.
OrderTuple MakeOrderTuple(std::span<const LabeledSample> samples);

// Index of an order tuple of size m in [0, (m!)^2 2^m).
std::uint64_t OrderTupleCode(const OrderTuple& tuple);
std::uint64_t OrderTupleCellCount(int m);

// One draw of the order sampling process: m samples from (p + q)/2, each
// labeled by the side it came from.
OrderTuple SampleOrderTuple(const SquareEdgeGadget& p, const SquareEdgeGadget& q, int m, Rng& rng);

struct OrderTupleTvEstimate {
  double estimate = 0.0;   // raw - null_mean
  double standard_error = 0.0;  // standard deviation of the null replicates
  double raw = 0.0;        // plug-in TV between the two empirical histograms
  double null_mean = 0.0;  // mean plug-in TV of equal-distribution replicates
};

// YES side: p = q = MIX. NO side: per tuple, (p, q) = (T, R) or (R, T) with a
// fair coin. N tuples per side. The plug-in TV is biased upward by sampling
// noise, so the same statistic is recomputed on `replicates` pairs of
// multinomial(N, pooled histogram) draws; the estimate subtracts their mean
// and the reported error is their standard deviation.
OrderTupleTvEstimate OrderTupleDistributionDistance(int m, std::int64_t n, Rng& rng,
                                                    int replicates = 20);

// ---------------------------------------------------------------------------
// Heavy/light diagonal hard instances.

inline constexpr double kSquaresPerK = 1.0 / 8.0;

struct DiagonalSquare {
  bool heavy = false;
  // Light squares in the far case: p gets T and q gets R when true.
  bool p_gets_t = true;
};

struct WeightedGadget {
  SquareEdgeGadget gadget;
  double mass = 0.0;
};

struct HardInstance {
  bool equal_case = true;
  int k = 0;
  double m = 0.0;
  double eps = 0.0;
  int r = 0;
  std::uint64_t seed = 0;
  std::vector<DiagonalSquare> squares;

  // Square i is [i, i+1]^2; its diamond touches the square's sides.
  SquareEdgeGadget GadgetFor(int square, GadgetVariant variant) const;
  std::vector<WeightedGadget> PSide() const;
  std::vector<WeightedGadget> QSide() const;
  int HeavyCount() const;
  int LightCount() const;
  // (#heavy)/m + (#light) eps / k.
  double TotalMass() const;
  // Sum over light squares of the four center quadrants' |p(R_i)/|p| - q(R_i)/|q||,
  // evaluated from the gadget geometry; 0 in the equal case.
  double PlantedDiscrepancy() const;
  // The planted boxes themselves (4 per light square).
  std::vector<AxisRectangle> PlantedRectangles() const;
};

// r = ceil(k / 8) diagonal squares, each heavy with probability m / k.
// Requires 0 < m < k / 2 and eps in (0, 1].
HardInstance GenHardInstance(int k, double m, double eps, bool equal_case, std::uint64_t seed);

// Discretized measure: each edge of each gadget becomes `atoms_per_edge`
// equal atoms at the midpoints of equal-length pieces. Quadrant masses around
// each square's center are preserved exactly.
DiscreteGridDistribution DiscretizeSide(const std::vector<WeightedGadget>& side,
                                        int atoms_per_edge);

// ---------------------------------------------------------------------------
// Random doubly-exponential monotone maps.
//
// f(x) = exp(x exp(l1)) exp(l2) + l3 with l1 ~ U[loglog W, 2 loglog W],
// l2 ~ U[0, log^3 W], l3 ~ U[0, exp(2 log^3 W)]. l3 is kept in log form.

using PreciseReal = boost::multiprecision::cpp_bin_float_50;

struct MonotoneMap {
  double w = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double log_lambda3 = 0.0;  // -inf when l3 = 0

  // l3 itself; +inf when beyond the double range.
  double Lambda3() const;
  // log f(x).
  double LogApply(double x) const;
  // f(x); OverflowError when f(x) is beyond the double range.
  double Apply(double x) const;
  // f(x) in 50-digit arithmetic.
  PreciseReal PreciseApply(double x) const;
};

MonotoneMap SampleMonotoneMap(double w, Rng& rng);

// (loglog A, log B, C / exp(2 log^3 W)) for A = (f(c) - f(a)) / (f(b) - f(a)),
// B = f(b) - f(a), C = f(a), evaluated in log space.
std::array<double, 3> TripleCoordinates(const MonotoneMap& f, double a, double b, double c);

// Plug-in TV between the binned distributions of TripleCoordinates for two
// triples, over `n` independent maps each.
double TripleObfuscationTv(double w, std::array<double, 3> first, std::array<double, 3> second,
                           std::int64_t n, Rng& rng);

}  // namespace aktest

#endif  // AKTEST_HARDNESS_H_
