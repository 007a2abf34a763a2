#ifndef AKTEST_COVERING_H_
#define AKTEST_COVERING_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "aktest/common.h"
#include "aktest/distributions.h"
#include "aktest/geometry.h"

namespace aktest {

// Per-axis sorted coordinates of m+1 generic points, m a power of two.
class SamplePointGrid {
 public:
  explicit SamplePointGrid(std::vector<std::vector<double>> axis_values);

  std::size_t dim() const { return axis_values_.size(); }
  // Number of gaps per axis; each axis holds m + 1 values.
  std::uint64_t m() const { return axis_values_.front().size() - 1; }
  const std::vector<double>& values(std::size_t axis) const { return axis_values_[axis]; }

 private:
  std::vector<std::vector<double>> axis_values_;
};

// Requires |points| = m + 1 with m >= 2 a power of two, and a generic set.
SamplePointGrid BuildGrid(const PointSet& points);
SamplePointGrid BuildGrid(const RankedSampleSet& samples);

// One dyadic interval on one axis. At level l (1 <= l <= log2 m) the span is
// cut into 2^l runs of m / 2^l gaps each; `index` counts runs from the left.
struct AxisInterval {
  int level = 0;
  std::uint32_t index = 0;
  friend auto operator<=>(const AxisInterval&, const AxisInterval&) = default;
};

// A family rectangle: one dyadic interval per axis.
using FamilyRect = std::vector<AxisInterval>;

// Either a family rectangle or the special empty element (key == 0).
struct InducedOutcome {
  std::uint64_t key = 0;
  bool IsEmpty() const { return key == 0; }
  friend bool operator==(const InducedOutcome&, const InducedOutcome&) = default;
};

// The dyadic grid covering of a sample-point grid.
//
// Membership is half-open: a level-l interval [v_a, v_b) holds values
// v_a <= z < v_b, except the last interval of each level which also holds the
// right end of the span. Every value of the span therefore lies in exactly
// one interval per level, and every point of the span lies in exactly
// (log2 m)^d family rectangles.
class CoverFamily {
 public:
  explicit CoverFamily(SamplePointGrid grid);

  const SamplePointGrid& grid() const { return grid_; }
  std::size_t dim() const { return grid_.dim(); }
  std::uint64_t m() const { return grid_.m(); }
  int levels() const { return levels_; }

  // (2m - 2)^d.
  std::uint64_t FamilySize() const;
  // (log2 m)^d.
  std::uint64_t ContainersPerPoint() const;

  // Gap index in [0, m) holding `value` on `axis`, or nullopt outside the span.
  std::optional<std::uint32_t> GapOf(std::size_t axis, double value) const;

  // Closed coordinate bounds [v_a, v_b] of a dyadic interval.
  std::pair<double, double> IntervalBounds(std::size_t axis, AxisInterval interval) const;
  bool IntervalHolds(std::size_t axis, AxisInterval interval, double value) const;

  AxisRectangle Rectangle(const FamilyRect& rect) const;
  // Half-open membership, matching the covering convention.
  bool RectHolds(const FamilyRect& rect, std::span<const double> z) const;

  // Packs a family rectangle into a nonzero 64-bit key.
  std::uint64_t Encode(const FamilyRect& rect) const;
  FamilyRect Decode(std::uint64_t key) const;

  // All family rectangles in lexicographic order of their per-axis intervals.
  std::vector<FamilyRect> AllRectangles() const;

  // Every family rectangle holding z; empty if z is outside the span.
  std::vector<FamilyRect> Containers(std::span<const double> z) const;

 private:
  SamplePointGrid grid_;
  int levels_;
  int bits_per_axis_;
};

CoverFamily BuildCover(const SamplePointGrid& grid);

// Splits a grid-aligned box into pairwise interior-disjoint family
// rectangles (at most 2 log2 m per axis, so at most (2 log2 m)^d in total).
// Endpoints must be grid values with lo < hi on every axis.
std::vector<FamilyRect> DecomposeGridRect(const CoverFamily& cover, const AxisRectangle& rect);

// One draw of the induced distribution given a base sample z: the empty
// element if z is outside the span, otherwise a uniformly random family
// rectangle containing z.
InducedOutcome InducedOutcomeOf(const CoverFamily& cover, std::span<const double> z, Rng& rng);

// Exact induced measure keyed by InducedOutcome::key (0 = empty element).
using InducedMeasure = std::map<std::uint64_t, double>;

// mass(R) = D(R) / (log2 m)^d for each family rectangle R (half-open
// membership); mass(empty) = D(outside span).
InducedMeasure InducedDistribution(const CoverFamily& cover, const DiscreteGridDistribution& dist);

// D(R) under the covering's half-open membership.
double FamilyMass(const CoverFamily& cover, const DiscreteGridDistribution& dist,
                  const FamilyRect& rect);

}  // namespace aktest

#endif  // AKTEST_COVERING_H_
