#include "aktest/flatten_l2.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aktest {

std::uint32_t SplitMap::Multiplicity(std::uint64_t element) const {
  auto it = extra_.find(element);
  return 1 + (it == extra_.end() ? 0 : it->second);
}

void SplitMap::Add(std::uint64_t element) {
  if (domain_size_ != 0 && element >= domain_size_) {
    std::ostringstream msg;
    msg << "SplitMap: element " << element << " outside domain of size " << domain_size_;
    throw UsageError(msg.str());
  }
  ++extra_[element];
  ++flattening_size_;
}

SplitMap BuildSplitMap(std::span<const std::uint64_t> samples, std::uint64_t domain_size) {
  SplitMap map(domain_size);
  for (std::uint64_t s : samples) map.Add(s);
  return map;
}

std::size_t SplitElementHash::operator()(const SplitElement& e) const noexcept {
  return static_cast<std::size_t>(Mix64(e.element * 0x100000001b3ULL ^ e.part));
}

SplitElement SplitSample(const SplitMap& map, std::uint64_t element, Rng& rng) {
  const std::uint32_t a = map.Multiplicity(element);
  if (a == 1) return {element, 1};
  std::uniform_int_distribution<std::uint32_t> part(1, a);
  return {element, part(rng)};
}

std::vector<double> SplitPushforward(const SplitMap& map, std::span<const double> dist) {
  if (map.domain_size() != 0 && dist.size() != map.domain_size()) {
    throw UsageError("SplitPushforward: distribution size differs from the split map domain");
  }
  std::vector<double> out;
  out.reserve(dist.size() + map.flattening_size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const std::uint32_t a = map.Multiplicity(i);
    for (std::uint32_t j = 0; j < a; ++j) out.push_back(dist[i] / a);
  }
  return out;
}

CountVector MakeCountVector(std::span<const std::int64_t> p_counts,
                            std::span<const std::int64_t> q_counts) {
  if (p_counts.size() != q_counts.size()) throw UsageError("MakeCountVector: length mismatch");
  CountVector out(p_counts.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (p_counts[i] < 0 || q_counts[i] < 0) throw UsageError("MakeCountVector: negative count");
    out[i] = {p_counts[i], q_counts[i]};
  }
  return out;
}

double L2CollisionStatistic(std::span<const CountPair> counts) {
  std::int64_t z = 0;
  for (const CountPair& c : counts) {
    const std::int64_t diff = c.p - c.q;
    z += diff * diff - c.p - c.q;
  }
  return static_cast<double>(z);
}

RobustL2Plan PlanRobustL2(double b, double eps, const RobustL2Options& options) {
  if (!(b > 0.0)) throw UsageError("robust l2 tester: norm bound b must be positive");
  if (!(eps > 0.0)) throw UsageError("robust l2 tester: eps must be positive");
  if (!(options.budget_scale > 0.0)) throw UsageError("robust l2 tester: budget scale must be positive");
  const double base = std::ceil(options.c_r * std::sqrt(b) / (eps * eps));
  const double m = std::ceil(base * options.budget_scale);
  if (!(m < 9.0e15)) {
    std::ostringstream msg;
    msg << "robust l2 tester: sample budget " << m << " is not representable";
    throw OverflowError(msg.str());
  }
  RobustL2Plan plan;
  plan.m = static_cast<std::int64_t>(m);
  plan.threshold = m * m * eps * eps / 2.0;
  return plan;
}

namespace {

// One Poissonized run of the collision statistic.
double CollisionRun(const ElementAccess& p, const ElementAccess& q, std::int64_t m,
                    const SplitMap* split, Rng& rng, std::int64_t& samples_used) {
  std::unordered_map<SplitElement, CountPair, SplitElementHash> counts;
  const std::int64_t np = PoissonDraw(static_cast<double>(m), rng);
  const std::int64_t nq = PoissonDraw(static_cast<double>(m), rng);
  counts.reserve(static_cast<std::size_t>(np + nq));
  auto element = [&](std::uint64_t base) {
    return split ? SplitSample(*split, base, rng) : SplitElement{base, 1};
  };
  for (std::int64_t i = 0; i < np; ++i) ++counts[element(p(rng))].p;
  for (std::int64_t i = 0; i < nq; ++i) ++counts[element(q(rng))].q;
  samples_used += np + nq;
  std::int64_t z = 0;
  for (const auto& [key, c] : counts) {
    const std::int64_t diff = c.p - c.q;
    z += diff * diff - c.p - c.q;
  }
  return static_cast<double>(z);
}

}  // namespace

TestVerdict RobustL2Test(const ElementAccess& p, const ElementAccess& q, double b, double eps,
                         const RobustL2Options& options, Rng& rng, const SplitMap* split) {
  if (options.repetitions < 1) throw UsageError("robust l2 tester: repetitions must be >= 1");
  const RobustL2Plan plan = PlanRobustL2(b, eps, options);
  TestVerdict verdict;
  std::vector<double> runs;
  for (int r = 0; r < options.repetitions; ++r) {
    runs.push_back(CollisionRun(p, q, plan.m, split, rng, verdict.samples_used));
  }
  std::sort(runs.begin(), runs.end());
  verdict.statistic = runs[runs.size() / 2];
  verdict.threshold = plan.threshold;
  verdict.decision = DecideByThreshold(verdict.statistic, verdict.threshold);
  verdict.kappa = eps * eps;
  return verdict;
}

FlattenPlan PlanFlatten(std::uint64_t s, double eps, const FlattenOptions& options) {
  if (s == 0) throw UsageError("Flatten-Closeness: s must be >= 1");
  if (!(eps > 0.0)) throw UsageError("Flatten-Closeness: eps must be positive");
  FlattenPlan plan;
  const double by_support = std::floor(static_cast<double>(s) / 100.0);
  const double by_accuracy = std::ceil(options.c_f * std::pow(eps, -4.0 / 3.0));
  plan.flatten_m = static_cast<std::int64_t>(std::min(by_support, by_accuracy));
  // Any distribution has squared l2 norm at most 1, so 1 is always a valid bound.
  plan.b = plan.flatten_m > 0 ? std::min(1.0, 40.0 / static_cast<double>(plan.flatten_m)) : 1.0;
  plan.robust_eps = eps / std::sqrt(3.0);
  plan.robust = PlanRobustL2(plan.b, plan.robust_eps, options.robust);
  return plan;
}

TestVerdict FlattenCloseness(const ElementAccess& p, const ElementAccess& q, std::uint64_t s,
                             double eps, const FlattenOptions& options, Rng& rng) {
  const FlattenPlan plan = PlanFlatten(s, eps, options);
  SplitMap split;
  const std::int64_t n0 =
      plan.flatten_m > 0 ? PoissonDraw(static_cast<double>(plan.flatten_m), rng) : 0;
  std::bernoulli_distribution coin(0.5);
  for (std::int64_t i = 0; i < n0; ++i) split.Add(coin(rng) ? q(rng) : p(rng));
  TestVerdict verdict = RobustL2Test(p, q, plan.b, plan.robust_eps, options.robust, rng, &split);
  verdict.samples_used += n0;
  verdict.kappa = eps * eps;
  return verdict;
}

}  // namespace aktest
