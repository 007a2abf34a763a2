#include "aktest/tester.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "aktest/covering.h"

namespace aktest {

std::string_view ToString(TesterMode mode) {
  return mode == TesterMode::kPaper ? "paper" : "practical";
}

TesterMode ParseTesterMode(std::string_view text) {
  if (text == "paper") return TesterMode::kPaper;
  if (text == "practical") return TesterMode::kPractical;
  throw UsageError("unknown mode '" + std::string(text) + "' (expected paper or practical)");
}

double TesterConfig::Alpha() const {
  if (mode == TesterMode::kPractical) return alpha_effective;
  if (alpha_override) return *alpha_override;
  return alpha_constant * d * d * std::exp2(std::exp2(d + 1));
}

void TesterConfig::Validate() const {
  if (k < 2) throw UsageError("tester: k must be >= 2");
  if (d < 1) throw UsageError("tester: d must be >= 1");
  if (!(eps > 0.0 && eps <= 2.0)) throw UsageError("tester: eps must lie in (0, 2]");
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw UsageError(std::string("tester: ") + name + " must be positive and finite");
    }
  };
  positive(budget_constant, "budget constant");
  positive(kappa_constant, "kappa constant");
  positive(Alpha(), "alpha");
  positive(s_multiplier, "s multiplier");
  positive(budget_multiplier, "budget multiplier");
  positive(consistency_constant, "consistency constant");
  if (mode == TesterMode::kPaper) {
    const ConsistencyReport report = CheckConsistency(*this);
    if (!report.satisfied) {
      std::ostringstream msg;
      msg.precision(6);
      msg << "tester (paper mode): budget m = " << report.m
          << " is below the required C max(kappa^(-2/3), kappa^(-1)/sqrt(k)) = exp("
          << report.log_required << ") (log kappa = " << LogKappa(*this, report.m)
          << "); log shortfall " << report.log_required - std::log(static_cast<double>(report.m));
      throw UsageError(msg.str());
    }
  }
}

TesterConfig PracticalDefaults(int k, int d, double eps) {
  TesterConfig cfg;
  cfg.k = k;
  cfg.d = d;
  cfg.eps = eps;
  cfg.mode = TesterMode::kPractical;
  cfg.budget_constant = 1.5;
  cfg.kappa_constant = 1.5;
  cfg.alpha_effective = 1.0;
  cfg.s_multiplier = 1.0;
  cfg.budget_multiplier = 1.0;
  return cfg;
}

std::int64_t SampleBudget(const TesterConfig& cfg) {
  if (cfg.k < 2 || cfg.d < 1 || !(cfg.eps > 0.0)) {
    throw UsageError("SampleBudget: need k >= 2, d >= 1, eps > 0");
  }
  // 50-digit evaluation: the ceiling stays exact for budgets up to 9e15 and
  // huge alpha cannot overflow the exponent range.
  using Precise = boost::multiprecision::cpp_bin_float_50;
  const Precise log2_k = boost::multiprecision::log2(Precise(cfg.k));
  const Precise value = Precise(cfg.budget_constant) * boost::multiprecision::pow(Precise(cfg.k), Precise(6) / 7) *
                        boost::multiprecision::pow(Precise(cfg.eps), -2 * Precise(cfg.Alpha()) / 3) *
                        boost::multiprecision::pow(log2_k, cfg.d) *
                        boost::multiprecision::pow(Precise(2), Precise(cfg.d) / 3);
  const Precise budget = boost::multiprecision::ceil(value);
  if (!(budget <= Precise(9.0e15))) {
    std::ostringstream msg;
    msg << "SampleBudget: budget exp(" << boost::multiprecision::log(value).convert_to<double>()
        << ") exceeds the 64-bit range";
    throw OverflowError(msg.str());
  }
  return budget.convert_to<std::int64_t>();
}

double LogKappa(const TesterConfig& cfg, std::int64_t m) {
  const double log_k = std::log2(static_cast<double>(cfg.k));
  return std::log(cfg.kappa_constant) - cfg.d * std::log(2.0) - 3.0 * cfg.d * std::log(log_k) +
         2.0 * cfg.Alpha() * std::log(cfg.eps / 4.0) + 2.0 * std::log(static_cast<double>(m)) -
         3.0 * std::log(static_cast<double>(cfg.k));
}

double Kappa(const TesterConfig& cfg, std::int64_t m) {
  const double log_k = std::log2(static_cast<double>(cfg.k));
  const double md = static_cast<double>(m);
  const double direct = cfg.kappa_constant * std::exp2(-cfg.d) * std::pow(log_k, -3.0 * cfg.d) *
                        std::pow(cfg.eps / 4.0, 2.0 * cfg.Alpha()) * md * md /
                        std::pow(static_cast<double>(cfg.k), 3.0);
  return direct;
}

ConsistencyReport CheckConsistency(const TesterConfig& cfg) {
  ConsistencyReport report;
  report.m = SampleBudget(cfg);
  report.kappa = Kappa(cfg, report.m);
  // In log space: kappa underflows for paper-mode alpha.
  const double log_kappa = LogKappa(cfg, report.m);
  const double log_required =
      std::log(cfg.consistency_constant) +
      std::max(-2.0 / 3.0 * log_kappa, -log_kappa - 0.5 * std::log(static_cast<double>(cfg.k)));
  report.log_required = log_required;
  report.required = std::exp(log_required);
  report.satisfied = std::log(static_cast<double>(report.m)) >= log_required;
  return report;
}

double MinimalBudgetConstant(const TesterConfig& cfg) {
  TesterConfig probe = cfg;
  auto holds = [&probe](double log_c) {
    probe.budget_constant = std::exp(log_c);
    return CheckConsistency(probe).satisfied;
  };
  double lo = std::log(1e-12);
  double hi = 0.0;
  try {
    if (holds(lo)) return std::exp(lo);
    while (!holds(hi)) {
      lo = hi;
      hi += 8.0;
    }
  } catch (const OverflowError&) {
    return std::numeric_limits<double>::infinity();
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return std::exp(hi);
}

namespace {

// One axis of the grid sample, sorted by (value, tie-break key).
struct SortedAxis {
  std::vector<double> values;
  std::vector<std::uint64_t> jitter;

  // Number of grid samples ranked strictly below a fresh value, with a fresh
  // tie-break key drawn only when the value collides with grid values.
  std::size_t SlotOf(double v, Rng& rng) const {
    const auto [first, last] = std::equal_range(values.begin(), values.end(), v);
    const auto lo = first - values.begin();
    const auto hi = last - values.begin();
    if (lo == hi) return static_cast<std::size_t>(lo);
    const std::uint64_t key = rng();
    const auto pos = std::lower_bound(jitter.begin() + lo, jitter.begin() + hi, key);
    return static_cast<std::size_t>(pos - jitter.begin());
  }
};

std::uint64_t PaddedGaps(std::size_t n) {
  std::uint64_t m = 2;
  while (m + 1 < n) m *= 2;
  return m;
}

}  // namespace

TestVerdict AkClosenessTest(const SampleAccess& p, const SampleAccess& q, const TesterConfig& cfg,
                            Rng& rng) {
  cfg.Validate();
  const std::size_t d = static_cast<std::size_t>(cfg.d);
  if (p.dim() != d || q.dim() != d) throw UsageError("tester: sample dimension differs from d");

  const std::int64_t m = SampleBudget(cfg);
  const double kappa = Kappa(cfg, m);

  // Grid sample from (p + q) / 2.
  const std::int64_t n = PoissonDraw(static_cast<double>(m), rng);
  std::vector<double> coords(static_cast<std::size_t>(n) * d);
  std::bernoulli_distribution coin(0.5);
  for (std::int64_t i = 0; i < n; ++i) {
    std::span<double> out(coords.data() + i * d, d);
    if (coin(rng)) {
      q.Draw(rng, out);
    } else {
      p.Draw(rng, out);
    }
    for (double v : out) {
      if (!std::isfinite(v)) throw UsageError("tester: sample access produced a non-finite coordinate");
    }
  }

  // Rank transform with random tie-breaking, kept per axis so that fresh
  // samples can be placed among the grid samples by comparisons alone.
  std::vector<SortedAxis> axes(d);
  const std::size_t count = static_cast<std::size_t>(n);
  for (std::size_t a = 0; a < d; ++a) {
    std::vector<std::uint64_t> key(count);
    for (auto& k : key) k = rng();
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      const double vx = coords[x * d + a], vy = coords[y * d + a];
      if (vx != vy) return vx < vy;
      if (key[x] != key[y]) return key[x] < key[y];
      return x < y;
    });
    axes[a].values.reserve(count);
    axes[a].jitter.reserve(count);
    for (std::size_t idx : order) {
      axes[a].values.push_back(coords[idx * d + a]);
      axes[a].jitter.push_back(key[idx]);
    }
  }

  // After ranking, axis values are 1..n; padding continues at n+1, n+2, ...
  const std::uint64_t gaps = PaddedGaps(count);
  std::vector<std::vector<double>> grid_axes(d, std::vector<double>(gaps + 1));
  for (auto& axis : grid_axes) std::iota(axis.begin(), axis.end(), 1.0);
  const CoverFamily cover = BuildCover(SamplePointGrid(std::move(grid_axes)));

  auto induced = [&](const SampleAccess& src) {
    return [&src, &axes, &cover, d](Rng& r) -> std::uint64_t {
      thread_local std::vector<double> raw, pos;
      raw.resize(d);
      pos.resize(d);
      src.Draw(r, raw);
      for (std::size_t a = 0; a < d; ++a) {
        pos[a] = static_cast<double>(axes[a].SlotOf(raw[a], r)) + 0.5;
      }
      return InducedOutcomeOf(cover, pos, r).key;
    };
  };
  const ElementAccess p_induced = induced(p);
  const ElementAccess q_induced = induced(q);

  const double s_value =
      std::ceil(cfg.s_multiplier * cfg.k * std::pow(static_cast<double>(cover.levels()), cfg.d));
  const std::uint64_t s = static_cast<std::uint64_t>(std::max(1.0, s_value));
  FlattenOptions options = cfg.flatten;
  options.robust.budget_scale = cfg.budget_multiplier;

  TestVerdict verdict = FlattenCloseness(p_induced, q_induced, s, std::sqrt(kappa), options, rng);
  verdict.samples_used += n;
  verdict.kappa = kappa;
  return verdict;
}

TestVerdict TvHistogramTest(const SampleAccess& p, const SampleAccess& q,
                            const TesterConfig& cfg_tv, Rng& rng) {
  if (!(cfg_tv.eps > 0.0)) throw UsageError("tv histogram test: eps must be positive");
  TesterConfig cfg = cfg_tv;
  cfg.eps = std::min(2.0 * cfg_tv.eps, 2.0);
  return AkClosenessTest(p, q, cfg, rng);
}

RectangleUnionHypothesis::RectangleUnionHypothesis(std::size_t dim,
                                                   std::vector<AxisRectangle> rects)
    : dim_(dim), rects_(std::move(rects)) {
  if (dim_ == 0) throw UsageError("RectangleUnionHypothesis: dimension must be >= 1");
  for (const auto& r : rects_) {
    if (r.dim() != dim_) throw UsageError("RectangleUnionHypothesis: rectangle dimension mismatch");
  }
}

bool RectangleUnionHypothesis::Label(std::span<const double> x) const {
  return std::any_of(rects_.begin(), rects_.end(),
                     [&](const AxisRectangle& r) { return Contains(r, x); });
}

bool RectangleUnionHypothesis::Draw(Rng& rng, std::span<double> x) const {
  for (std::size_t a = 0; a < dim_; ++a) x[a] = Uniform01(rng);
  return Label(x);
}

Point ReductionSentinel(std::size_t dim) { return Point(dim, -1.0); }

HypothesisReductionAccess::HypothesisReductionAccess(std::shared_ptr<const LabeledPointAccess> h)
    : h_(std::move(h)) {
  if (!h_) throw UsageError("HypothesisReductionAccess: null hypothesis");
}

void HypothesisReductionAccess::Draw(Rng& rng, std::span<double> out) const {
  if (!h_->Draw(rng, out)) std::fill(out.begin(), out.end(), -1.0);
}

double UnionVolume(std::span<const AxisRectangle> rects) {
  if (rects.empty()) return 0.0;
  const std::size_t d = rects.front().dim();
  std::vector<std::vector<double>> cuts(d);
  for (const auto& r : rects) {
    if (r.dim() != d) throw UsageError("UnionVolume: dimension mismatch");
    for (std::size_t a = 0; a < d; ++a) {
      cuts[a].push_back(r.lo(a));
      cuts[a].push_back(r.hi(a));
    }
  }
  std::uint64_t cells = 1;
  for (auto& c : cuts) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (c.size() < 2) return 0.0;
    cells *= c.size() - 1;
    if (cells > (std::uint64_t{1} << 32)) throw InfeasibleError("UnionVolume: too many cells");
  }
  double total = 0.0;
  std::vector<std::size_t> idx(d, 0);
  Point mid(d);
  for (std::uint64_t cell = 0; cell < cells; ++cell) {
    double vol = 1.0;
    for (std::size_t a = 0; a < d; ++a) {
      mid[a] = 0.5 * (cuts[a][idx[a]] + cuts[a][idx[a] + 1]);
      vol *= cuts[a][idx[a] + 1] - cuts[a][idx[a]];
    }
    if (vol > 0.0 && std::any_of(rects.begin(), rects.end(),
                                 [&](const AxisRectangle& r) { return Contains(r, mid); })) {
      total += vol;
    }
    for (std::size_t a = 0; a < d; ++a) {
      if (++idx[a] < cuts[a].size() - 1) break;
      idx[a] = 0;
    }
  }
  return total;
}

double ReductionSentinelMass(const RectangleUnionHypothesis& h) {
  std::vector<AxisRectangle> clipped;
  for (const auto& r : h.rects()) {
    std::vector<double> lo(h.dim()), hi(h.dim());
    bool empty = false;
    for (std::size_t a = 0; a < h.dim(); ++a) {
      lo[a] = std::clamp(r.lo(a), 0.0, 1.0);
      hi[a] = std::clamp(r.hi(a), 0.0, 1.0);
      empty = empty || !(lo[a] < hi[a]);
    }
    if (!empty) clipped.emplace_back(std::move(lo), std::move(hi));
  }
  return 1.0 - UnionVolume(clipped);
}

TestVerdict HypothesisEquivalenceTest(std::shared_ptr<const LabeledPointAccess> h1,
                                      std::shared_ptr<const LabeledPointAccess> h2,
                                      const TesterConfig& cfg, Rng& rng) {
  if (!h1 || !h2) throw UsageError("hypothesis test: null hypothesis");
  if (h1->dim() != h2->dim()) throw UsageError("hypothesis test: dimension mismatch");
  const HypothesisReductionAccess p(std::move(h1));
  const HypothesisReductionAccess q(std::move(h2));
  TesterConfig reduced = cfg;
  reduced.eps = cfg.eps / 2.0;
  return AkClosenessTest(p, q, reduced, rng);
}

}  // namespace aktest
