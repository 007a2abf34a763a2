#ifndef AKTEST_FLATTEN_L2_H_
#define AKTEST_FLATTEN_L2_H_

#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "aktest/common.h"
#include "aktest/verdict.h"

namespace aktest {

// Sample access to a discrete distribution; elements are 64-bit ids.
using ElementAccess = std::function<std::uint64_t(Rng&)>;

// Multiplicities of a split distribution: a_i = 1 + (occurrences of i in the
// flattening multiset). Stored sparsely, so the base domain may be huge.
class SplitMap {
 public:
  // domain_size == 0 denotes an unbounded id space (no range check).
  explicit SplitMap(std::uint64_t domain_size = 0) : domain_size_(domain_size) {}

  std::uint64_t domain_size() const { return domain_size_; }
  std::uint64_t flattening_size() const { return flattening_size_; }
  // n + |S|; only meaningful for a bounded domain.
  std::uint64_t SplitDomainSize() const { return domain_size_ + flattening_size_; }

  std::uint32_t Multiplicity(std::uint64_t element) const;
  void Add(std::uint64_t element);

 private:
  std::uint64_t domain_size_;
  std::uint64_t flattening_size_ = 0;
  std::unordered_map<std::uint64_t, std::uint32_t> extra_;
};

SplitMap BuildSplitMap(std::span<const std::uint64_t> samples, std::uint64_t domain_size);

// (i, j) with 1 <= j <= a_i.
struct SplitElement {
  std::uint64_t element = 0;
  std::uint32_t part = 1;
  friend bool operator==(const SplitElement&, const SplitElement&) = default;
};

struct SplitElementHash {
  std::size_t operator()(const SplitElement& e) const noexcept;
};

// Maps one base sample to one split sample: j uniform on [a_i].
SplitElement SplitSample(const SplitMap& map, std::uint64_t element, Rng& rng);

// mass(i, j) = dist[i] / a_i, laid out element by element (j ascending).
std::vector<double> SplitPushforward(const SplitMap& map, std::span<const double> dist);

// Poissonized per-element counts of P-samples and Q-samples. Elements with
// no samples on either side can be left out.
struct CountPair {
  std::int64_t p = 0;
  std::int64_t q = 0;
};
using CountVector = std::vector<CountPair>;

CountVector MakeCountVector(std::span<const std::int64_t> p_counts,
                            std::span<const std::int64_t> q_counts);

// Z = sum_i (X_i - Y_i)^2 - X_i - Y_i. Unbiased for m^2 ||p - q||_2^2 when
// X_i ~ Poi(m p_i) and Y_i ~ Poi(m q_i) are independent.
double L2CollisionStatistic(std::span<const CountPair> counts);

struct RobustL2Options {
  double c_r = 4.0;       // budget constant: m = ceil(c_r sqrt(b) / eps^2)
  int repetitions = 3;    // the reported statistic is the median over runs
  double budget_scale = 1.0;
};

// Budget and threshold of the robust l2 tester for a given (b, eps).
struct RobustL2Plan {
  std::int64_t m = 0;
  double threshold = 0.0;  // m^2 eps^2 / 2
};
RobustL2Plan PlanRobustL2(double b, double eps, const RobustL2Options& options);

// Distinguishes p = q from ||p - q||_2 > eps given b >= max(||p||^2, ||q||^2).
// Each repetition draws Poi(m) samples from each side, passes them through
// `split` when given, and evaluates Z; reject iff median Z >= m^2 eps^2 / 2.
TestVerdict RobustL2Test(const ElementAccess& p, const ElementAccess& q, double b, double eps,
                         const RobustL2Options& options, Rng& rng,
                         const SplitMap* split = nullptr);

struct FlattenOptions {
  double c_f = 2.0;  // flattening budget: ceil(c_f eps^(-4/3))
  RobustL2Options robust;
};

struct FlattenPlan {
  std::int64_t flatten_m = 0;  // m0 = min(floor(s/100), ceil(c_f eps^(-4/3)))
  double b = 1.0;              // min(1, 40 / m0), or 1 when m0 == 0
  double robust_eps = 0.0;     // eps / sqrt(3)
  RobustL2Plan robust;
};
FlattenPlan PlanFlatten(std::uint64_t s, double eps, const FlattenOptions& options);

// Flatten-then-test: draws Poi(m0) samples from (p + q)/2 to build a split
// map, then runs the robust l2 tester on the split distributions.
// Distinguishes p = q from the case where some s elements, each of mass at
// most 1/s under (p + q)/2, carry l2^2 discrepancy >= eps^2.
TestVerdict FlattenCloseness(const ElementAccess& p, const ElementAccess& q, std::uint64_t s,
                             double eps, const FlattenOptions& options, Rng& rng);

}  // namespace aktest

#endif  // AKTEST_FLATTEN_L2_H_
