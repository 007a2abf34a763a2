#include "aktest/distributions.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace aktest {

namespace {

void CheckAxes(const std::vector<std::vector<double>>& axes) {
  if (axes.empty()) throw UsageError("distribution: dimension must be >= 1");
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const auto& axis = axes[a];
    for (std::size_t i = 0; i < axis.size(); ++i) {
      if (!std::isfinite(axis[i])) {
        std::ostringstream msg;
        msg << "distribution: non-finite coordinate on axis " << a;
        throw UsageError(msg.str());
      }
      if (i > 0 && !(axis[i - 1] < axis[i])) {
        std::ostringstream msg;
        msg << "distribution: axis " << a << " is not strictly increasing";
        throw UsageError(msg.str());
      }
    }
  }
}

std::uint32_t AxisPosition(const std::vector<double>& axis, double v) {
  auto it = std::lower_bound(axis.begin(), axis.end(), v);
  return static_cast<std::uint32_t>(it - axis.begin());
}

}  // namespace

DiscreteGridDistribution::DiscreteGridDistribution(
    std::vector<std::vector<double>> axes, std::map<GridIndex, double> mass)
    : axes_(std::move(axes)) {
  CheckAxes(axes_);
  for (auto& [index, w] : mass) {
    if (index.size() != axes_.size()) {
      throw UsageError("distribution: index tuple has wrong dimension");
    }
    for (std::size_t a = 0; a < index.size(); ++a) {
      if (index[a] >= axes_[a].size()) {
        std::ostringstream msg;
        msg << "distribution: index " << index[a] << " out of range on axis " << a;
        throw UsageError(msg.str());
      }
    }
    if (!std::isfinite(w) || w < 0.0) {
      throw UsageError("distribution: masses must be finite and nonnegative");
    }
    if (w > 0.0) {
      mass_.emplace(index, w);
      total_ += w;
    }
  }
}

DiscreteGridDistribution DiscreteGridDistribution::FromPoints(
    std::span<const std::pair<Point, double>> weighted_points) {
  if (weighted_points.empty()) throw UsageError("FromPoints: no points");
  const std::size_t d = weighted_points.front().first.size();
  std::vector<std::vector<double>> axes(d);
  for (const auto& [p, w] : weighted_points) {
    if (p.size() != d) throw UsageError("FromPoints: dimension mismatch");
    for (std::size_t a = 0; a < d; ++a) axes[a].push_back(p[a]);
  }
  for (auto& axis : axes) {
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
  }
  std::map<GridIndex, double> mass;
  for (const auto& [p, w] : weighted_points) {
    GridIndex index(d);
    for (std::size_t a = 0; a < d; ++a) index[a] = AxisPosition(axes[a], p[a]);
    mass[index] += w;
  }
  return DiscreteGridDistribution(std::move(axes), std::move(mass));
}

bool DiscreteGridDistribution::IsNormalized() const {
  return std::abs(total_ - 1.0) <= kNormalizationTolerance;
}

Point DiscreteGridDistribution::Coordinates(const GridIndex& index) const {
  Point p(dim());
  for (std::size_t a = 0; a < dim(); ++a) p[a] = axes_[a].at(index.at(a));
  return p;
}

std::vector<std::pair<Point, double>> DiscreteGridDistribution::Support() const {
  std::vector<std::pair<Point, double>> out;
  out.reserve(mass_.size());
  for (const auto& [index, w] : mass_) out.emplace_back(Coordinates(index), w);
  return out;
}

double DiscreteGridDistribution::MassAt(std::span<const double> z) const {
  if (z.size() != dim()) throw UsageError("MassAt: dimension mismatch");
  GridIndex index(dim());
  for (std::size_t a = 0; a < dim(); ++a) {
    const std::uint32_t pos = AxisPosition(axes_[a], z[a]);
    if (pos == axes_[a].size() || axes_[a][pos] != z[a]) return 0.0;
    index[a] = pos;
  }
  auto it = mass_.find(index);
  return it == mass_.end() ? 0.0 : it->second;
}

double MassOf(const DiscreteGridDistribution& dist, const AxisRectangle& rect) {
  if (rect.dim() != dist.dim()) throw UsageError("MassOf: dimension mismatch");
  // Per axis, the index range of coordinates inside [lo, hi].
  const std::size_t d = dist.dim();
  std::vector<std::uint32_t> first(d), last(d);
  for (std::size_t a = 0; a < d; ++a) {
    const auto& axis = dist.axes()[a];
    first[a] = AxisPosition(axis, rect.lo(a));
    last[a] = static_cast<std::uint32_t>(
        std::upper_bound(axis.begin(), axis.end(), rect.hi(a)) - axis.begin());
    if (first[a] >= last[a]) return 0.0;
  }
  double total = 0.0;
  for (const auto& [index, w] : dist.mass()) {
    bool inside = true;
    for (std::size_t a = 0; a < d && inside; ++a) {
      inside = index[a] >= first[a] && index[a] < last[a];
    }
    if (inside) total += w;
  }
  return total;
}

DiscreteGridDistribution MixtureHalf(const DiscreteGridDistribution& p,
                                     const DiscreteGridDistribution& q) {
  if (p.dim() != q.dim()) throw UsageError("MixtureHalf: dimension mismatch");
  std::vector<std::pair<Point, double>> points;
  for (const auto& [x, w] : p.Support()) points.emplace_back(x, 0.5 * w);
  for (const auto& [x, w] : q.Support()) points.emplace_back(x, 0.5 * w);
  if (points.empty()) {
    return DiscreteGridDistribution(std::vector<std::vector<double>>(p.dim()), {});
  }
  return DiscreteGridDistribution::FromPoints(points);
}

GridSampler::GridSampler(const DiscreteGridDistribution& dist) : dim_(dist.dim()) {
  if (!(dist.TotalMass() > 0.0)) throw UsageError("GridSampler: distribution has zero mass");
  double running = 0.0;
  for (const auto& [index, w] : dist.mass()) {
    support_.push_back(dist.Coordinates(index));
    running += w;
    cumulative_.push_back(running);
  }
}

std::size_t GridSampler::DrawIndex(Rng& rng) const {
  const double u = Uniform01(rng) * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

void GridSampler::Draw(Rng& rng, std::span<double> out) const {
  const Point& p = support_[DrawIndex(rng)];
  std::copy(p.begin(), p.end(), out.begin());
}

MappedAccess::MappedAccess(std::shared_ptr<const SampleAccess> base,
                           std::vector<AxisMap> maps)
    : base_(std::move(base)), maps_(std::move(maps)) {
  if (maps_.size() != base_->dim()) throw UsageError("MappedAccess: one map per axis required");
}

void MappedAccess::Draw(Rng& rng, std::span<double> out) const {
  base_->Draw(rng, out);
  for (std::size_t a = 0; a < maps_.size(); ++a) out[a] = maps_[a](out[a]);
}

std::vector<Point> SamplePoisson(const DiscreteGridDistribution& dist, double m, Rng& rng) {
  if (!(m > 0.0)) throw UsageError("SamplePoisson: m must be positive");
  if (!(dist.TotalMass() > 0.0)) throw UsageError("SamplePoisson: distribution has zero mass");
  const GridSampler sampler(dist);
  const std::int64_t n = PoissonDraw(m * dist.TotalMass(), rng);
  std::vector<Point> out(static_cast<std::size_t>(n), Point(dist.dim()));
  for (Point& p : out) sampler.Draw(rng, p);
  return out;
}

std::vector<std::uint32_t> RankWithRandomTies(std::span<const double> values, Rng& rng) {
  const std::size_t n = values.size();
  std::vector<std::uint64_t> jitter(n);
  for (auto& j : jitter) j = rng();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    if (jitter[a] != jitter[b]) return jitter[a] < jitter[b];
    return a < b;
  });
  std::vector<std::uint32_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[order[r]] = static_cast<std::uint32_t>(r + 1);
  return rank;
}

RankedSampleSet RankTransform(std::span<const LabeledSample> samples, Rng& rng) {
  RankedSampleSet out;
  out.tie_break_seed = rng();
  if (samples.empty()) return out;
  Rng tie_rng(out.tie_break_seed);
  const std::size_t d = samples.front().point.size();
  out.samples.assign(samples.begin(), samples.end());
  std::vector<double> column(samples.size());
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].point.size() != d) throw UsageError("RankTransform: dimension mismatch");
      column[i] = samples[i].point[a];
    }
    const auto ranks = RankWithRandomTies(column, tie_rng);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      out.samples[i].point[a] = static_cast<double>(ranks[i]);
    }
  }
  return out;
}

}  // namespace aktest
