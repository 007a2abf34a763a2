#ifndef AKTEST_TESTER_H_
#define AKTEST_TESTER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aktest/common.h"
#include "aktest/distributions.h"
#include "aktest/flatten_l2.h"
#include "aktest/geometry.h"
#include "aktest/verdict.h"

namespace aktest {

enum class TesterMode { kPaper, kPractical };

std::string_view ToString(TesterMode mode);
TesterMode ParseTesterMode(std::string_view text);

// Parameters of the A_k closeness tester.
//
// Both modes evaluate the same budget and accuracy formulas
//   m     = ceil(C' k^(6/7) eps^(-2 alpha / 3) (log2 k)^d 2^(d/3))
//   kappa = c 2^(-d) (log2 k)^(-3d) (eps/4)^(2 alpha) m^2 / k^3
// and differ in alpha: paper mode uses alpha_d = C d^2 2^(2^(d+1)) (or an
// explicit override), practical mode uses `alpha_effective`.
struct TesterConfig {
  int k = 2;
  int d = 1;
  double eps = 1.0;
  TesterMode mode = TesterMode::kPractical;

  double budget_constant = 1.0;  // C'
  double kappa_constant = 1.0;   // c
  double alpha_constant = 1.0;   // C in alpha_d = C d^2 2^(2^(d+1))
  std::optional<double> alpha_override;
  double alpha_effective = 1.0;
  // C in the paper-mode check m >= C max(kappa^(-2/3), kappa^(-1)/sqrt(k)).
  double consistency_constant = 1.0;

  // Flatten-Closeness support parameter: s = ceil(s_multiplier k (log2 m)^d).
  double s_multiplier = 1.0;
  // Scales the Poissonized budget of the final l2 stage.
  double budget_multiplier = 1.0;
  FlattenOptions flatten;

  // k >= 2, d >= 1, 0 < eps <= 2, positive constants; in paper mode also the
  // budget/accuracy consistency condition.
  void Validate() const;
  double Alpha() const;
};

// Frozen practical-mode constants (see config/practical.json).
TesterConfig PracticalDefaults(int k, int d, double eps);

std::int64_t SampleBudget(const TesterConfig& cfg);
double Kappa(const TesterConfig& cfg, std::int64_t m);
// log(kappa), finite even where kappa underflows.
double LogKappa(const TesterConfig& cfg, std::int64_t m);

struct ConsistencyReport {
  std::int64_t m = 0;
  double kappa = 0.0;
  double required = 0.0;  // C max(kappa^(-2/3), kappa^(-1)/sqrt(k))
  double log_required = 0.0;
  bool satisfied = false;
};
ConsistencyReport CheckConsistency(const TesterConfig& cfg);

// Smallest budget constant C' for which the paper-mode condition holds with
// the other constants of `cfg` fixed (found by bisection on log C').
double MinimalBudgetConstant(const TesterConfig& cfg);

// Runs the multidimensional A_k closeness tester:
//  1. m = SampleBudget(cfg); draw Poi(m) labeled samples from (p + q)/2;
//  2. replace coordinates by ranks, ties broken uniformly at random;
//  3. pad with points at ranks beyond the maximum until |S| = 2^t + 1;
//  4. build the sample-point grid and its dyadic covering;
//  5. push fresh samples of p and q through the induced distribution;
//  6. run Flatten-Closeness with s = ceil(s_mult k (log2 2^t)^d) and
//     accuracy sqrt(kappa).
// Only coordinate comparisons reach the statistic, so a strictly monotone
// per-axis map of the inputs leaves the verdict unchanged for a fixed seed.
TestVerdict AkClosenessTest(const SampleAccess& p, const SampleAccess& q,
                            const TesterConfig& cfg, Rng& rng);

// k-histograms over a common rectangle partition: d_TV = A_k / 2, so this
// runs the A_k tester with accuracy min(2 eps_tv, 2).
TestVerdict TvHistogramTest(const SampleAccess& p, const SampleAccess& q,
                            const TesterConfig& cfg_tv, Rng& rng);

// Labeled examples (x, h(x)) with x uniform on the unit cube.
class LabeledPointAccess {
 public:
  virtual ~LabeledPointAccess() = default;
  virtual std::size_t dim() const = 0;
  virtual bool Draw(Rng& rng, std::span<double> x) const = 0;
};

// h(x) = 1 iff x lies in one of the boxes.
class RectangleUnionHypothesis : public LabeledPointAccess {
 public:
  RectangleUnionHypothesis(std::size_t dim, std::vector<AxisRectangle> rects);

  std::size_t dim() const override { return dim_; }
  bool Draw(Rng& rng, std::span<double> x) const override;
  bool Label(std::span<const double> x) const;
  const std::vector<AxisRectangle>& rects() const { return rects_; }

 private:
  std::size_t dim_;
  std::vector<AxisRectangle> rects_;
};

// Point returned for label-0 examples: (-1, ..., -1).
Point ReductionSentinel(std::size_t dim);

// Pushforward used by the hypothesis reduction: x if h(x) = 1, else the
// sentinel.
class HypothesisReductionAccess : public SampleAccess {
 public:
  explicit HypothesisReductionAccess(std::shared_ptr<const LabeledPointAccess> h);
  std::size_t dim() const override { return h_->dim(); }
  void Draw(Rng& rng, std::span<double> out) const override;

 private:
  std::shared_ptr<const LabeledPointAccess> h_;
};

// Lebesgue measure of a union of boxes (coordinate compression).
double UnionVolume(std::span<const AxisRectangle> rects);

// Sentinel mass of the reduction distribution: 1 - vol(union of h's boxes
// clipped to the unit cube).
double ReductionSentinelMass(const RectangleUnionHypothesis& h);

// Runs the A_k tester with accuracy eps / 2 on the reduction distributions.
TestVerdict HypothesisEquivalenceTest(std::shared_ptr<const LabeledPointAccess> h1,
                                      std::shared_ptr<const LabeledPointAccess> h2,
                                      const TesterConfig& cfg, Rng& rng);

}  // namespace aktest

#endif  // AKTEST_TESTER_H_
