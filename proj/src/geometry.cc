#include "aktest/geometry.h"

#include <algorithm>
#include <limits>
#include <sstream>

namespace aktest {

namespace {

void CheckSameDim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw UsageError(msg.str());
  }
}

// Carves outer \ inner starting from `axis`; outer and inner agree on all
// earlier axes (those were already narrowed to inner's extent).
void Carve(std::vector<double> lo, std::vector<double> hi,
           const AxisRectangle& inner, std::size_t axis,
           std::vector<AxisRectangle>& out) {
  if (axis == lo.size()) return;
  if (lo[axis] < inner.lo(axis)) {
    std::vector<double> slab_hi = hi;
    slab_hi[axis] = inner.lo(axis);
    out.emplace_back(lo, std::move(slab_hi));
  }
  if (inner.hi(axis) < hi[axis]) {
    std::vector<double> slab_lo = lo;
    slab_lo[axis] = inner.hi(axis);
    out.emplace_back(std::move(slab_lo), hi);
  }
  lo[axis] = inner.lo(axis);
  hi[axis] = inner.hi(axis);
  Carve(std::move(lo), std::move(hi), inner, axis + 1, out);
}

}  // namespace

AxisRectangle::AxisRectangle(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.empty()) throw UsageError("AxisRectangle: dimension must be >= 1");
  CheckSameDim(lo_.size(), hi_.size(), "AxisRectangle");
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (!(lo_[i] <= hi_[i])) {
      std::ostringstream msg;
      msg << "AxisRectangle: lo > hi on axis " << i;
      throw UsageError(msg.str());
    }
  }
}

double AxisRectangle::Volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) v *= hi_[i] - lo_[i];
  return v;
}

bool AxisRectangle::IsDegenerate() const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (lo_[i] == hi_[i]) return true;
  }
  return false;
}

bool AxisRectangle::Encloses(const AxisRectangle& inner) const {
  CheckSameDim(dim(), inner.dim(), "Encloses");
  for (std::size_t i = 0; i < dim(); ++i) {
    if (inner.lo_[i] < lo_[i] || inner.hi_[i] > hi_[i]) return false;
  }
  return true;
}

std::string AxisRectangle::ToString() const {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < dim(); ++i) {
    if (i) out << "x";
    out << "[" << lo_[i] << "," << hi_[i] << "]";
  }
  return out.str();
}

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) return;
  dim_ = points_.front().size();
  for (const Point& p : points_) CheckSameDim(dim_, p.size(), "PointSet");
  std::vector<double> column(points_.size());
  for (std::size_t axis = 0; axis < dim_ && generic_; ++axis) {
    for (std::size_t i = 0; i < points_.size(); ++i) column[i] = points_[i][axis];
    std::sort(column.begin(), column.end());
    generic_ = std::adjacent_find(column.begin(), column.end()) == column.end();
  }
}

AxisRectangle RectFromPoints(std::span<const double> x, std::span<const double> y) {
  CheckSameDim(x.size(), y.size(), "RectFromPoints");
  std::vector<double> lo(x.size()), hi(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lo[i] = std::min(x[i], y[i]);
    hi[i] = std::max(x[i], y[i]);
  }
  return AxisRectangle(std::move(lo), std::move(hi));
}

bool Contains(const AxisRectangle& rect, std::span<const double> z) {
  CheckSameDim(rect.dim(), z.size(), "Contains");
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] < rect.lo(i) || z[i] > rect.hi(i)) return false;
  }
  return true;
}

std::vector<AxisRectangle> DecomposeComplement(const AxisRectangle& outer,
                                               const AxisRectangle& inner) {
  if (!outer.Encloses(inner)) {
    throw UsageError("DecomposeComplement: inner box is not contained in outer box");
  }
  std::vector<AxisRectangle> out;
  out.reserve(2 * outer.dim());
  Carve(outer.lo(), outer.hi(), inner, 0, out);
  return out;
}

std::optional<DominatingTriple> FindDominatingTriple(const PointSet& points) {
  if (!points.generic()) {
    throw UsageError("FindDominatingTriple: point set is not generic (shared coordinate)");
  }
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const AxisRectangle box = RectFromPoints(points[i], points[j]);
      for (std::size_t t = 0; t < n; ++t) {
        if (t == i || t == j) continue;
        if (Contains(box, points[t])) {
          return DominatingTriple{points[i], points[j], points[t]};
        }
      }
    }
  }
  return std::nullopt;
}

std::uint64_t ErdosSzekeresThreshold(std::uint64_t n, int d) {
  if (n < 2) throw UsageError("ErdosSzekeresThreshold: n must be >= 2");
  if (d < 1) throw UsageError("ErdosSzekeresThreshold: d must be >= 1");
  const std::uint64_t base = n - 1;
  if (base == 1) return 2;
  // base^(2^d) by d repeated squarings.
  std::uint64_t value = base;
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  for (int i = 0; i < d; ++i) {
    if (value > kMax / value) {
      std::ostringstream msg;
      msg << "ErdosSzekeresThreshold: (" << base << ")^(2^" << d
          << ") + 1 exceeds 64-bit range";
      throw OverflowError(msg.str());
    }
    value *= value;
  }
  if (value == kMax) throw OverflowError("ErdosSzekeresThreshold: +1 overflows");
  return value + 1;
}

}  // namespace aktest
