#ifndef AKTEST_DISTRIBUTIONS_H_
#define AKTEST_DISTRIBUTIONS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "aktest/common.h"
#include "aktest/geometry.h"

namespace aktest {

inline constexpr double kNormalizationTolerance = 1e-12;

using GridIndex = std::vector<std::uint32_t>;

// Nonnegative measure on a finite product grid. Axes hold strictly
// increasing coordinates; mass is sparse over index tuples. Zero masses are
// dropped on construction.
class DiscreteGridDistribution {
 public:
  DiscreteGridDistribution(std::vector<std::vector<double>> axes,
                           std::map<GridIndex, double> mass);

  // Builds the axes from the coordinates that occur. Repeated points add up.
  static DiscreteGridDistribution FromPoints(
      std::span<const std::pair<Point, double>> weighted_points);

  std::size_t dim() const { return axes_.size(); }
  const std::vector<std::vector<double>>& axes() const { return axes_; }
  const std::map<GridIndex, double>& mass() const { return mass_; }

  double TotalMass() const { return total_; }
  bool IsNormalized() const;

  Point Coordinates(const GridIndex& index) const;
  // Support points paired with their masses, in index order.
  std::vector<std::pair<Point, double>> Support() const;

  // Mass at the exact point z (0 if z is not a support point).
  double MassAt(std::span<const double> z) const;

  friend bool operator==(const DiscreteGridDistribution&,
                         const DiscreteGridDistribution&) = default;

 private:
  std::vector<std::vector<double>> axes_;
  std::map<GridIndex, double> mass_;
  double total_ = 0.0;
};

// Sum of masses of support points inside the closed box.
double MassOf(const DiscreteGridDistribution& dist, const AxisRectangle& rect);

// (p + q) / 2 on the union of the two coordinate grids.
DiscreteGridDistribution MixtureHalf(const DiscreteGridDistribution& p,
                                     const DiscreteGridDistribution& q);

// Pull interface for i.i.d. samples in R^d. Draw must be safe to call
// concurrently with distinct generators.
class SampleAccess {
 public:
  virtual ~SampleAccess() = default;
  virtual std::size_t dim() const = 0;
  virtual void Draw(Rng& rng, std::span<double> out) const = 0;
};

// Samples from dist / TotalMass(dist) by inverse-CDF lookup.
class GridSampler : public SampleAccess {
 public:
  explicit GridSampler(const DiscreteGridDistribution& dist);

  std::size_t dim() const override { return dim_; }
  void Draw(Rng& rng, std::span<double> out) const override;
  // Index into support() of the next draw.
  std::size_t DrawIndex(Rng& rng) const;
  const std::vector<Point>& support() const { return support_; }

 private:
  std::size_t dim_;
  std::vector<Point> support_;
  std::vector<double> cumulative_;
};

// Applies a per-axis coordinate map to another access' samples.
class MappedAccess : public SampleAccess {
 public:
  using AxisMap = std::function<double(double)>;
  MappedAccess(std::shared_ptr<const SampleAccess> base, std::vector<AxisMap> maps);

  std::size_t dim() const override { return base_->dim(); }
  void Draw(Rng& rng, std::span<double> out) const override;

 private:
  std::shared_ptr<const SampleAccess> base_;
  std::vector<AxisMap> maps_;
};

// Draws N ~ Poisson(m * TotalMass(dist)), then N points from the normalized
// distribution.
std::vector<Point> SamplePoisson(const DiscreteGridDistribution& dist, double m, Rng& rng);

enum class Label : std::uint8_t { kP = 0, kQ = 1 };

struct LabeledSample {
  Point point;
  Label label;
  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

// Samples whose coordinates on every axis form a permutation of 1..m.
struct RankedSampleSet {
  std::vector<LabeledSample> samples;
  std::uint64_t tie_break_seed = 0;
};

// Per-axis ranks 1..n of `values`; equal values are ordered uniformly at
// random.
std::vector<std::uint32_t> RankWithRandomTies(std::span<const double> values, Rng& rng);

// Replaces every coordinate by its rank on that axis. Labels and the pairing
// of coordinates within a sample are kept.
RankedSampleSet RankTransform(std::span<const LabeledSample> samples, Rng& rng);

}  // namespace aktest

#endif  // AKTEST_DISTRIBUTIONS_H_
