#ifndef AKTEST_GEOMETRY_H_
#define AKTEST_GEOMETRY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aktest/common.h"

namespace aktest {

// Closed box [lo_0, hi_0] x ... x [lo_{d-1}, hi_{d-1}].
class AxisRectangle {
 public:
  AxisRectangle(std::vector<double> lo, std::vector<double> hi);

  std::size_t dim() const { return lo_.size(); }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  double lo(std::size_t axis) const { return lo_[axis]; }
  double hi(std::size_t axis) const { return hi_[axis]; }

  double Volume() const;
  // True iff some axis has zero width.
  bool IsDegenerate() const;
  // True iff `inner` lies inside this box (closed).
  bool Encloses(const AxisRectangle& inner) const;

  std::string ToString() const;

  friend bool operator==(const AxisRectangle&, const AxisRectangle&) = default;

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
};

// A finite point cloud. `generic` is derived on construction: no two points
// share a value on any axis.
class PointSet {
 public:
  explicit PointSet(std::vector<Point> points);

  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return dim_; }
  bool generic() const { return generic_; }
  const std::vector<Point>& points() const { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }

 private:
  std::vector<Point> points_;
  std::size_t dim_ = 0;
  bool generic_ = true;
};

// R_{x,y}: the smallest closed box containing x and y.
AxisRectangle RectFromPoints(std::span<const double> x, std::span<const double> y);

bool Contains(const AxisRectangle& rect, std::span<const double> z);

// Splits R \ inner into at most 2d boxes. Slabs are carved along axis 0
// first, then the middle slab recurses on the remaining axes. Zero-width
// slabs are dropped.
std::vector<AxisRectangle> DecomposeComplement(const AxisRectangle& outer,
                                               const AxisRectangle& inner);

struct DominatingTriple {
  Point x;
  Point y;
  Point z;  // z lies in RectFromPoints(x, y) and differs from x and y.
};

// Exhaustive search over pairs {x, y} and third points z. Requires a
// generic set; returns nullopt if no point of S lies in a box spanned by two
// others.
std::optional<DominatingTriple> FindDominatingTriple(const PointSet& points);

// (n-1)^(2^d) + 1, the least length forcing a length-n subsequence that is
// monotone in every coordinate of R^d.
std::uint64_t ErdosSzekeresThreshold(std::uint64_t n, int d);

}  // namespace aktest

#endif  // AKTEST_GEOMETRY_H_
