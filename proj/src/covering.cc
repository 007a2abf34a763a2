#include "aktest/covering.h"

#include <algorithm>
#include <sstream>

namespace aktest {

namespace {

void CheckPaddedSize(std::size_t count) {
  if (count < 3 || !IsPowerOfTwo(count - 1)) {
    std::ostringstream msg;
    msg << "BuildGrid: need m + 1 points with m >= 2 a power of two, got " << count;
    throw UsageError(msg.str());
  }
}

SamplePointGrid GridFromColumns(const std::vector<Point>& points) {
  const std::size_t d = points.front().size();
  std::vector<std::vector<double>> axes(d, std::vector<double>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t a = 0; a < d; ++a) axes[a][i] = points[i][a];
  }
  for (auto& axis : axes) std::sort(axis.begin(), axis.end());
  return SamplePointGrid(std::move(axes));
}

// Canonical decomposition of the gap range [lo, hi) into dyadic nodes below
// node (level, index), which spans `width` gaps.
void Dyadic(std::uint32_t lo, std::uint32_t hi, int level, std::uint32_t index,
            std::uint64_t width, std::vector<AxisInterval>& out) {
  const std::uint64_t start = static_cast<std::uint64_t>(index) * width;
  const std::uint64_t end = start + width;
  if (hi <= start || end <= lo) return;
  if (lo <= start && end <= hi) {
    out.push_back({level, index});
    return;
  }
  Dyadic(lo, hi, level + 1, 2 * index, width / 2, out);
  Dyadic(lo, hi, level + 1, 2 * index + 1, width / 2, out);
}

std::uint32_t ExactGridIndex(const std::vector<double>& values, double v, std::size_t axis) {
  auto it = std::lower_bound(values.begin(), values.end(), v);
  if (it == values.end() || *it != v) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "DecomposeGridRect: endpoint " << v << " on axis " << axis << " is not a grid value";
    throw UsageError(msg.str());
  }
  return static_cast<std::uint32_t>(it - values.begin());
}

}  // namespace

SamplePointGrid::SamplePointGrid(std::vector<std::vector<double>> axis_values)
    : axis_values_(std::move(axis_values)) {
  if (axis_values_.empty()) throw UsageError("SamplePointGrid: dimension must be >= 1");
  const std::size_t count = axis_values_.front().size();
  CheckPaddedSize(count);
  for (const auto& axis : axis_values_) {
    if (axis.size() != count) throw UsageError("SamplePointGrid: axes differ in length");
    for (std::size_t i = 1; i < axis.size(); ++i) {
      if (!(axis[i - 1] < axis[i])) {
        throw UsageError("SamplePointGrid: axis values must be strictly increasing");
      }
    }
  }
}

SamplePointGrid BuildGrid(const PointSet& points) {
  CheckPaddedSize(points.size());
  if (!points.generic()) throw UsageError("BuildGrid: points share a coordinate value");
  return GridFromColumns(points.points());
}

SamplePointGrid BuildGrid(const RankedSampleSet& samples) {
  std::vector<Point> points;
  points.reserve(samples.samples.size());
  for (const auto& s : samples.samples) points.push_back(s.point);
  return BuildGrid(PointSet(std::move(points)));
}

CoverFamily::CoverFamily(SamplePointGrid grid)
    : grid_(std::move(grid)), levels_(Log2Floor(grid_.m())), bits_per_axis_(levels_ + 1) {
  if (static_cast<std::size_t>(bits_per_axis_) * dim() > 64) {
    throw UsageError("CoverFamily: rectangle keys would exceed 64 bits (m or d too large)");
  }
}

CoverFamily BuildCover(const SamplePointGrid& grid) { return CoverFamily(grid); }

std::uint64_t CoverFamily::FamilySize() const {
  std::uint64_t size = 1;
  for (std::size_t a = 0; a < dim(); ++a) size *= 2 * m() - 2;
  return size;
}

std::uint64_t CoverFamily::ContainersPerPoint() const {
  std::uint64_t size = 1;
  for (std::size_t a = 0; a < dim(); ++a) size *= static_cast<std::uint64_t>(levels_);
  return size;
}

std::optional<std::uint32_t> CoverFamily::GapOf(std::size_t axis, double value) const {
  const auto& values = grid_.values(axis);
  if (value < values.front() || value > values.back()) return std::nullopt;
  auto it = std::upper_bound(values.begin(), values.end(), value);
  auto gap = static_cast<std::uint32_t>(it - values.begin()) - 1;
  return std::min<std::uint32_t>(gap, static_cast<std::uint32_t>(m() - 1));
}

std::pair<double, double> CoverFamily::IntervalBounds(std::size_t axis,
                                                      AxisInterval interval) const {
  const std::uint64_t width = m() >> interval.level;
  const auto& values = grid_.values(axis);
  return {values[interval.index * width], values[(interval.index + 1) * width]};
}

bool CoverFamily::IntervalHolds(std::size_t axis, AxisInterval interval, double value) const {
  const auto gap = GapOf(axis, value);
  return gap && (*gap >> (levels_ - interval.level)) == interval.index;
}

AxisRectangle CoverFamily::Rectangle(const FamilyRect& rect) const {
  std::vector<double> lo(dim()), hi(dim());
  for (std::size_t a = 0; a < dim(); ++a) std::tie(lo[a], hi[a]) = IntervalBounds(a, rect[a]);
  return AxisRectangle(std::move(lo), std::move(hi));
}

bool CoverFamily::RectHolds(const FamilyRect& rect, std::span<const double> z) const {
  for (std::size_t a = 0; a < dim(); ++a) {
    if (!IntervalHolds(a, rect[a], z[a])) return false;
  }
  return true;
}

std::uint64_t CoverFamily::Encode(const FamilyRect& rect) const {
  std::uint64_t key = 0;
  for (std::size_t a = 0; a < dim(); ++a) {
    const std::uint64_t node = (std::uint64_t{1} << rect[a].level) + rect[a].index;
    key |= node << (a * bits_per_axis_);
  }
  return key;
}

FamilyRect CoverFamily::Decode(std::uint64_t key) const {
  if (key == 0) throw UsageError("CoverFamily::Decode: key of the empty element");
  FamilyRect rect(dim());
  const std::uint64_t mask = (bits_per_axis_ == 64) ? ~0ULL : ((1ULL << bits_per_axis_) - 1);
  for (std::size_t a = 0; a < dim(); ++a) {
    const std::uint64_t node = (key >> (a * bits_per_axis_)) & mask;
    const int level = Log2Floor(node);
    rect[a] = {level, static_cast<std::uint32_t>(node - (1ULL << level))};
  }
  return rect;
}

std::vector<FamilyRect> CoverFamily::AllRectangles() const {
  std::vector<AxisInterval> per_axis;
  for (int level = 1; level <= levels_; ++level) {
    for (std::uint32_t i = 0; i < (1u << level); ++i) per_axis.push_back({level, i});
  }
  std::vector<FamilyRect> out{FamilyRect{}};
  for (std::size_t a = 0; a < dim(); ++a) {
    std::vector<FamilyRect> next;
    next.reserve(out.size() * per_axis.size());
    for (const auto& prefix : out) {
      for (const auto& iv : per_axis) {
        next.push_back(prefix);
        next.back().push_back(iv);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<FamilyRect> CoverFamily::Containers(std::span<const double> z) const {
  if (z.size() != dim()) throw UsageError("Containers: dimension mismatch");
  std::vector<std::vector<AxisInterval>> per_axis(dim());
  for (std::size_t a = 0; a < dim(); ++a) {
    const auto gap = GapOf(a, z[a]);
    if (!gap) return {};
    for (int level = 1; level <= levels_; ++level) {
      per_axis[a].push_back({level, *gap >> (levels_ - level)});
    }
  }
  std::vector<FamilyRect> out{FamilyRect{}};
  for (std::size_t a = 0; a < dim(); ++a) {
    std::vector<FamilyRect> next;
    for (const auto& prefix : out) {
      for (const auto& iv : per_axis[a]) {
        next.push_back(prefix);
        next.back().push_back(iv);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<FamilyRect> DecomposeGridRect(const CoverFamily& cover, const AxisRectangle& rect) {
  if (rect.dim() != cover.dim()) throw UsageError("DecomposeGridRect: dimension mismatch");
  std::vector<std::vector<AxisInterval>> per_axis(cover.dim());
  for (std::size_t a = 0; a < cover.dim(); ++a) {
    const auto& values = cover.grid().values(a);
    const std::uint32_t lo = ExactGridIndex(values, rect.lo(a), a);
    const std::uint32_t hi = ExactGridIndex(values, rect.hi(a), a);
    if (lo >= hi) throw UsageError("DecomposeGridRect: rectangle has zero width on some axis");
    const std::uint64_t half = cover.m() / 2;
    Dyadic(lo, hi, 1, 0, half, per_axis[a]);
    Dyadic(lo, hi, 1, 1, half, per_axis[a]);
  }
  std::vector<FamilyRect> out{FamilyRect{}};
  for (std::size_t a = 0; a < cover.dim(); ++a) {
    std::vector<FamilyRect> next;
    for (const auto& prefix : out) {
      for (const auto& iv : per_axis[a]) {
        next.push_back(prefix);
        next.back().push_back(iv);
      }
    }
    out = std::move(next);
  }
  return out;
}

InducedOutcome InducedOutcomeOf(const CoverFamily& cover, std::span<const double> z, Rng& rng) {
  if (z.size() != cover.dim()) throw UsageError("InducedOutcomeOf: dimension mismatch");
  const int levels = cover.levels();
  std::uniform_int_distribution<int> pick_level(1, levels);
  const int bits = levels + 1;
  std::uint64_t key = 0;
  for (std::size_t a = 0; a < cover.dim(); ++a) {
    const auto gap = cover.GapOf(a, z[a]);
    if (!gap) return InducedOutcome{};
    const int level = pick_level(rng);
    const std::uint64_t node = (std::uint64_t{1} << level) + (*gap >> (levels - level));
    key |= node << (a * bits);
  }
  return InducedOutcome{key};
}

InducedMeasure InducedDistribution(const CoverFamily& cover,
                                   const DiscreteGridDistribution& dist) {
  if (dist.dim() != cover.dim()) throw UsageError("InducedDistribution: dimension mismatch");
  InducedMeasure out;
  const double share = 1.0 / static_cast<double>(cover.ContainersPerPoint());
  for (const auto& [z, w] : dist.Support()) {
    const auto containers = cover.Containers(z);
    if (containers.empty()) {
      out[0] += w;
      continue;
    }
    for (const auto& rect : containers) out[cover.Encode(rect)] += w * share;
  }
  return out;
}

double FamilyMass(const CoverFamily& cover, const DiscreteGridDistribution& dist,
                  const FamilyRect& rect) {
  double total = 0.0;
  for (const auto& [z, w] : dist.Support()) {
    if (cover.RectHolds(rect, z)) total += w;
  }
  return total;
}

}  // namespace aktest
