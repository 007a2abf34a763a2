#ifndef AKTEST_ORACLE_H_
#define AKTEST_ORACLE_H_

#include <vector>

#include "aktest/distributions.h"
#include "aktest/geometry.h"

namespace aktest {

// Exact-search caps for AkDistanceBruteForce.
inline constexpr std::size_t kOracleMaxCoordinatesPerAxis = 12;
inline constexpr int kOracleMaxK = 4;

// A family of boxes. `disjoint` means no support point of the instance lies
// in two of them (interior disjointness alone is not enough on a grid).
struct RectangleFamily {
  std::vector<AxisRectangle> rects;
  bool disjoint = false;
};

struct AkDistanceResult {
  double value = 0.0;
  RectangleFamily family;
};

// max over families of at most k support-disjoint boxes of
// sum_i |p(R_i) - q(R_i)|. Boxes are enumerated with endpoints on the combined
// support coordinates and deduplicated by the support points they hold; the
// search is a branch-and-bound over boxes sorted by decreasing value.
// Throws InfeasibleError beyond 12 coordinates per axis or k > 4.
AkDistanceResult AkDistanceBruteForce(const DiscreteGridDistribution& p,
                                      const DiscreteGridDistribution& q, int k);

// One-dimensional A_k by dynamic programming over runs of consecutive support
// points: f[j][t] = max(f[j][t-1], max_s f[j-1][s] + |sum_{s<i<=t} (p_i - q_i)|).
double AkDistance1d(const DiscreteGridDistribution& p, const DiscreteGridDistribution& q, int k);

// sum_z |p(z) - q(z)| over the combined support.
double L1Distance(const DiscreteGridDistribution& p, const DiscreteGridDistribution& q);

// E_{x,y ~ w} |p(R_{x,y}) - q(R_{x,y})| where w is (p + q)/2 restricted to the
// closed box and renormalized; exhaustive over ordered support pairs.
double RandomPairDiscrepancy(const DiscreteGridDistribution& p, const DiscreteGridDistribution& q,
                             const AxisRectangle& rect);

// 2 |p(S) - q(S)| / (p(S) + q(S)).
double DiscrepancyDensity(const DiscreteGridDistribution& p, const DiscreteGridDistribution& q,
                          const AxisRectangle& set);

// E_{x,y ~ D} D(R_{x,y}) for D normalized, exhaustive over ordered pairs.
double PairBoxMassExpectation(const DiscreteGridDistribution& dist);

// (2^(2^(d-1)) + 1)^(-3) for 1 <= d <= 3.
double ConstantMassBound(int d);

}  // namespace aktest

#endif  // AKTEST_ORACLE_H_
