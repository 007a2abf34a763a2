#include "aktest/oracle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_set>

namespace aktest {

namespace {

// Combined support of p and q: point -> (p mass, q mass), in point order.
struct CombinedSupport {
  std::vector<Point> points;
  std::vector<double> p_mass;
  std::vector<double> q_mass;
};

CombinedSupport Combine(const DiscreteGridDistribution& p, const DiscreteGridDistribution& q) {
  if (p.dim() != q.dim()) throw UsageError("oracle: p and q differ in dimension");
  std::map<Point, std::pair<double, double>> merged;
  for (const auto& [z, w] : p.Support()) merged[z].first += w;
  for (const auto& [z, w] : q.Support()) merged[z].second += w;
  CombinedSupport out;
  for (const auto& [z, pq] : merged) {
    out.points.push_back(z);
    out.p_mass.push_back(pq.first);
    out.q_mass.push_back(pq.second);
  }
  return out;
}

using Bits = std::vector<std::uint64_t>;

struct BitsHash {
  std::size_t operator()(const Bits& bits) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::uint64_t w : bits) h = Mix64(h ^ w);
    return static_cast<std::size_t>(h);
  }
};

bool Disjoint(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] & b[i]) return false;
  }
  return true;
}

struct Candidate {
  Bits bits;
  double value = 0.0;     // |p(R) - q(R)|
  double abs_mass = 0.0;  // sum over held points of |p(z) - q(z)|
  AxisRectangle box;
};

class BranchAndBound {
 public:
  BranchAndBound(const std::vector<Candidate>& candidates, int k, std::size_t words)
      : candidates_(candidates), k_(k), used_(words, 0) {}

  void Run(double total_abs_mass) { Search(0, 0, 0.0, total_abs_mass); }
  double best() const { return best_; }
  const std::vector<std::size_t>& best_choice() const { return best_choice_; }

 private:
  void Search(std::size_t start, int depth, double current, double unused_abs_mass) {
    if (current > best_) {
      best_ = current;
      best_choice_ = choice_;
    }
    if (depth == k_) return;
    const double slots = static_cast<double>(k_ - depth);
    for (std::size_t i = start; i < candidates_.size(); ++i) {
      const Candidate& c = candidates_[i];
      // Values are sorted in decreasing order, so this bound only shrinks.
      if (current + std::min(slots * c.value, unused_abs_mass) <= best_) break;
      if (!Disjoint(c.bits, used_)) continue;
      for (std::size_t w = 0; w < used_.size(); ++w) used_[w] |= c.bits[w];
      choice_.push_back(i);
      Search(i + 1, depth + 1, current + c.value, unused_abs_mass - c.abs_mass);
      choice_.pop_back();
      for (std::size_t w = 0; w < used_.size(); ++w) used_[w] &= ~c.bits[w];
    }
  }

  const std::vector<Candidate>& candidates_;
  int k_;
  Bits used_;
  std::vector<std::size_t> choice_;
  std::vector<std::size_t> best_choice_;
  double best_ = 0.0;
};

}  // namespace

AkDistanceResult AkDistanceBruteForce(const DiscreteGridDistribution& p,
                                      const DiscreteGridDistribution& q, int k) {
  if (k < 1) throw UsageError("ak_distance_bruteforce: k must be >= 1");
  if (k > kOracleMaxK) {
    std::ostringstream msg;
    msg << "ak_distance_bruteforce: k = " << k << " exceeds the cap k <= " << kOracleMaxK;
    throw InfeasibleError(msg.str());
  }
  const CombinedSupport support = Combine(p, q);
  const std::size_t d = p.dim();
  const std::size_t n = support.points.size();
  AkDistanceResult result;
  result.family.disjoint = true;
  if (n == 0) return result;

  std::vector<std::vector<double>> coords(d);
  for (const Point& z : support.points) {
    for (std::size_t a = 0; a < d; ++a) coords[a].push_back(z[a]);
  }
  for (std::size_t a = 0; a < d; ++a) {
    auto& c = coords[a];
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (c.size() > kOracleMaxCoordinatesPerAxis) {
      std::ostringstream msg;
      msg << "ak_distance_bruteforce: axis " << a << " has " << c.size()
          << " support coordinates, cap is " << kOracleMaxCoordinatesPerAxis;
      throw InfeasibleError(msg.str());
    }
  }

  const std::size_t words = (n + 63) / 64;
  std::vector<double> diff(n), abs_diff(n);
  double total_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = support.p_mass[i] - support.q_mass[i];
    abs_diff[i] = std::abs(diff[i]);
    total_abs += abs_diff[i];
  }

  // Per axis and coordinate interval [c_i, c_j]: the points whose coordinate
  // falls inside.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> intervals(d);
  std::vector<std::vector<Bits>> interval_bits(d);
  for (std::size_t a = 0; a < d; ++a) {
    const auto& c = coords[a];
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = i; j < c.size(); ++j) {
        Bits bits(words, 0);
        for (std::size_t t = 0; t < n; ++t) {
          const double v = support.points[t][a];
          if (c[i] <= v && v <= c[j]) bits[t / 64] |= std::uint64_t{1} << (t % 64);
        }
        intervals[a].push_back({i, j});
        interval_bits[a].push_back(std::move(bits));
      }
    }
  }

  std::vector<Candidate> candidates;
  std::unordered_set<Bits, BitsHash> seen;
  std::vector<std::size_t> odometer(d, 0);
  while (true) {
    Bits bits = interval_bits[0][odometer[0]];
    for (std::size_t a = 1; a < d; ++a) {
      const Bits& other = interval_bits[a][odometer[a]];
      for (std::size_t w = 0; w < words; ++w) bits[w] &= other[w];
    }
    const bool nonempty = std::any_of(bits.begin(), bits.end(), [](auto w) { return w != 0; });
    if (nonempty && seen.insert(bits).second) {
      double sum = 0.0, abs_mass = 0.0;
      for (std::size_t w = 0; w < words; ++w) {
        for (std::uint64_t word = bits[w]; word != 0; word &= word - 1) {
          const std::size_t t = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
          sum += diff[t];
          abs_mass += abs_diff[t];
        }
      }
      if (std::abs(sum) > 0.0) {
        std::vector<double> lo(d), hi(d);
        for (std::size_t a = 0; a < d; ++a) {
          lo[a] = coords[a][intervals[a][odometer[a]].first];
          hi[a] = coords[a][intervals[a][odometer[a]].second];
        }
        candidates.push_back(
            {std::move(bits), std::abs(sum), abs_mass, AxisRectangle(std::move(lo), std::move(hi))});
      }
    }
    std::size_t a = 0;
    for (; a < d; ++a) {
      if (++odometer[a] < intervals[a].size()) break;
      odometer[a] = 0;
    }
    if (a == d) break;
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.value > y.value; });
  BranchAndBound search(candidates, k, words);
  search.Run(total_abs);
  result.value = search.best();
  for (std::size_t i : search.best_choice()) result.family.rects.push_back(candidates[i].box);
  return result;
}

double AkDistance1d(const DiscreteGridDistribution& p, const DiscreteGridDistribution& q, int k) {
  if (p.dim() != 1 || q.dim() != 1) throw UsageError("ak_distance_1d: requires d = 1");
  if (k < 1) throw UsageError("ak_distance_1d: k must be >= 1");
  const CombinedSupport support = Combine(p, q);
  const std::size_t n = support.points.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = support.p_mass[i] - support.q_mass[i];

  const double kNone = -std::numeric_limits<double>::infinity();
  std::vector<double> prev(n + 1, 0.0), cur(n + 1, 0.0), reach(n + 1);
  for (int j = 1; j <= k; ++j) {
    std::fill(reach.begin(), reach.end(), kNone);
    for (std::size_t s = 0; s < n; ++s) {
      double sum = 0.0;
      for (std::size_t e = s; e < n; ++e) {
        sum += diff[e];
        reach[e + 1] = std::max(reach[e + 1], prev[s] + std::abs(sum));
      }
    }
    cur[0] = 0.0;
    for (std::size_t t = 1; t <= n; ++t) cur[t] = std::max({cur[t - 1], reach[t], prev[t]});
    std::swap(prev, cur);
  }
  return prev[n];
}

double L1Distance(const DiscreteGridDistribution& p, const DiscreteGridDistribution& q) {
  const CombinedSupport support = Combine(p, q);
  double total = 0.0;
  for (std::size_t i = 0; i < support.points.size(); ++i) {
    total += std::abs(support.p_mass[i] - support.q_mass[i]);
  }
  return total;
}

double RandomPairDiscrepancy(const DiscreteGridDistribution& p, const DiscreteGridDistribution& q,
                             const AxisRectangle& rect) {
  const CombinedSupport support = Combine(p, q);
  if (rect.dim() != p.dim()) throw UsageError("random_pair_discrepancy: dimension mismatch");
  std::vector<std::size_t> inside;
  double total = 0.0;
  for (std::size_t i = 0; i < support.points.size(); ++i) {
    if (Contains(rect, support.points[i])) {
      inside.push_back(i);
      total += 0.5 * (support.p_mass[i] + support.q_mass[i]);
    }
  }
  if (!(total > 0.0)) throw UsageError("random_pair_discrepancy: p(R) + q(R) must be positive");
  double expectation = 0.0;
  for (std::size_t x : inside) {
    const double wx = 0.5 * (support.p_mass[x] + support.q_mass[x]) / total;
    for (std::size_t y : inside) {
      const double wy = 0.5 * (support.p_mass[y] + support.q_mass[y]) / total;
      if (wx == 0.0 || wy == 0.0) continue;
      const AxisRectangle box = RectFromPoints(support.points[x], support.points[y]);
      double signed_mass = 0.0;
      for (std::size_t z : inside) {
        if (Contains(box, support.points[z])) {
          signed_mass += support.p_mass[z] - support.q_mass[z];
        }
      }
      expectation += wx * wy * std::abs(signed_mass);
    }
  }
  return expectation;
}

double DiscrepancyDensity(const DiscreteGridDistribution& p, const DiscreteGridDistribution& q,
                          const AxisRectangle& set) {
  const double ps = MassOf(p, set);
  const double qs = MassOf(q, set);
  if (!(ps + qs > 0.0)) throw UsageError("discrepancy_density: p(S) + q(S) must be positive");
  return 2.0 * std::abs(ps - qs) / (ps + qs);
}

double PairBoxMassExpectation(const DiscreteGridDistribution& dist) {
  const auto support = dist.Support();
  const double total = dist.TotalMass();
  if (!(total > 0.0)) throw UsageError("PairBoxMassExpectation: zero total mass");
  double expectation = 0.0;
  for (const auto& [x, wx] : support) {
    for (const auto& [y, wy] : support) {
      const AxisRectangle box = RectFromPoints(x, y);
      double inside = 0.0;
      for (const auto& [z, wz] : support) {
        if (Contains(box, z)) inside += wz;
      }
      expectation += (wx / total) * (wy / total) * (inside / total);
    }
  }
  return expectation;
}

double ConstantMassBound(int d) {
  if (d < 1 || d > 3) throw UsageError("constant_mass_bound: d must lie in [1, 3]");
  const double base = std::exp2(std::exp2(d - 1)) + 1.0;
  return 1.0 / (base * base * base);
}

}  // namespace aktest
