#include "verify.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "aktest/covering.h"
#include "aktest/flatten_l2.h"
#include "aktest/geometry.h"
#include "aktest/hardness.h"
#include "aktest/oracle.h"

namespace aktest::cli {

namespace {

std::string Fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

VerifyCheck Make(const std::string& suite, const std::string& property, bool passed,
                 const std::string& detail) {
  return {suite, property, passed, detail};
}

// m + 1 generic points whose per-axis coordinates are 1..m+1 in random order.
SamplePointGrid IntegerGrid(std::uint64_t m, int d, Rng& rng) {
  std::vector<std::vector<std::uint32_t>> perms(d);
  for (auto& perm : perms) {
    perm.resize(m + 1);
    std::iota(perm.begin(), perm.end(), 1u);
    std::shuffle(perm.begin(), perm.end(), rng);
  }
  std::vector<Point> pts(m + 1, Point(d));
  for (std::uint64_t i = 0; i <= m; ++i) {
    for (int a = 0; a < d; ++a) pts[i][a] = perms[a][i];
  }
  return BuildGrid(PointSet(std::move(pts)));
}

bool InteriorsDisjoint(const AxisRectangle& a, const AxisRectangle& b) {
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a.hi(i) <= b.lo(i) || b.hi(i) <= a.lo(i)) return true;
  }
  return false;
}

std::vector<VerifyCheck> CoveringSuite(std::uint64_t seed) {
  const std::string suite = "covering";
  std::vector<VerifyCheck> checks;
  Rng rng(seed);
  for (int d = 1; d <= 3; ++d) {
    for (std::uint64_t m : {4u, 8u, 16u}) {
      const CoverFamily cover = BuildCover(IntegerGrid(m, d, rng));
      const std::uint64_t expected = cover.ContainersPerPoint();
      const auto family = cover.AllRectangles();
      const std::string where = " (m=" + std::to_string(m) + ", d=" + std::to_string(d) + ")";

      // Every grid cell, by exhaustive scan of the family at the cell midpoint.
      std::uint64_t cells = 1;
      for (int a = 0; a < d; ++a) cells *= m;
      std::uint64_t bad_cells = 0;
      Point z(d);
      for (std::uint64_t c = 0; c < cells; ++c) {
        std::uint64_t rest = c;
        for (int a = 0; a < d; ++a) {
          z[a] = 1.5 + static_cast<double>(rest % m);
          rest /= m;
        }
        std::uint64_t count = 0;
        for (const auto& rect : family) count += cover.RectHolds(rect, z) ? 1 : 0;
        bad_cells += count != expected ? 1 : 0;
      }
      checks.push_back(Make(suite, "every grid cell lies in exactly (log2 m)^d family rectangles" + where,
                            bad_cells == 0 && family.size() == cover.FamilySize(),
                            std::to_string(cells) + " cells, expected " + std::to_string(expected) +
                                ", mismatches " + std::to_string(bad_cells)));

      // Grid points, including the right end of the span.
      std::uint64_t points = 1;
      for (int a = 0; a < d; ++a) points *= m + 1;
      std::uint64_t bad_points = 0;
      for (std::uint64_t c = 0; c < points; ++c) {
        std::uint64_t rest = c;
        for (int a = 0; a < d; ++a) {
          z[a] = 1.0 + static_cast<double>(rest % (m + 1));
          rest /= m + 1;
        }
        const auto holders = cover.Containers(z);
        bool ok = holders.size() == expected;
        for (const auto& rect : holders) ok = ok && cover.RectHolds(rect, z);
        bad_points += ok ? 0 : 1;
      }
      checks.push_back(Make(suite, "every grid point lies in exactly (log2 m)^d family rectangles" + where,
                            bad_points == 0,
                            std::to_string(points) + " points, mismatches " + std::to_string(bad_points)));

      // Random grid-aligned rectangles split into few disjoint pieces with exact union.
      const double cap = std::pow(2.0 * cover.levels(), d);
      std::size_t worst = 0;
      int failures = 0;
      for (int t = 0; t < 500; ++t) {
        std::vector<double> lo(d), hi(d);
        double volume = 1.0;
        for (int a = 0; a < d; ++a) {
          std::uint64_t u = UniformIndex(m + 1, rng), v = UniformIndex(m + 1, rng);
          while (u == v) v = UniformIndex(m + 1, rng);
          lo[a] = 1.0 + static_cast<double>(std::min(u, v));
          hi[a] = 1.0 + static_cast<double>(std::max(u, v));
          volume *= hi[a] - lo[a];
        }
        const AxisRectangle rect(lo, hi);
        const auto pieces = DecomposeGridRect(cover, rect);
        worst = std::max(worst, pieces.size());
        std::vector<AxisRectangle> boxes;
        double piece_volume = 0.0;
        bool ok = static_cast<double>(pieces.size()) <= cap;
        for (const auto& piece : pieces) {
          boxes.push_back(cover.Rectangle(piece));
          piece_volume += boxes.back().Volume();
          ok = ok && rect.Encloses(boxes.back());
        }
        for (std::size_t i = 0; ok && i < boxes.size(); ++i) {
          for (std::size_t j = i + 1; ok && j < boxes.size(); ++j) {
            ok = InteriorsDisjoint(boxes[i], boxes[j]);
          }
        }
        ok = ok && piece_volume == volume;
        failures += ok ? 0 : 1;
      }
      checks.push_back(Make(suite,
                            "grid rectangles decompose into <= (2 log2 m)^d disjoint family rectangles "
                            "with exact union" + where,
                            failures == 0,
                            "500 rectangles, most pieces " + std::to_string(worst) + " (cap " +
                                Fmt(cap) + "), failures " + std::to_string(failures)));
    }
  }
  return checks;
}

std::vector<double> RandomDistribution(std::size_t n, Rng& rng) {
  std::vector<double> p(n);
  std::exponential_distribution<double> expo(1.0);
  for (auto& v : p) v = expo(rng);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= total;
  return p;
}

double SquaredNorm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

std::vector<VerifyCheck> SplitSuite(std::uint64_t seed) {
  const std::string suite = "split";
  std::vector<VerifyCheck> checks;
  Rng rng(seed);

  double worst_l1 = 0.0;
  int l1_fail = 0;
  int mono_fail = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + UniformIndex(19, rng);
    const auto p = RandomDistribution(n, rng);
    const auto q = RandomDistribution(n, rng);
    std::vector<std::uint64_t> sample(UniformIndex(31, rng));
    for (auto& s : sample) s = UniformIndex(n, rng);
    const SplitMap map = BuildSplitMap(sample, n);
    const auto ps = SplitPushforward(map, p);
    const auto qs = SplitPushforward(map, q);
    double base = 0.0, split = 0.0;
    for (std::size_t i = 0; i < n; ++i) base += std::abs(p[i] - q[i]);
    for (std::size_t i = 0; i < ps.size(); ++i) split += std::abs(ps[i] - qs[i]);
    worst_l1 = std::max(worst_l1, std::abs(base - split));
    l1_fail += std::abs(base - split) <= 1e-12 ? 0 : 1;

    // Nested multisets S_0 c S_1 c ... give nonincreasing split norms.
    SplitMap growing(n);
    double prev = std::sqrt(SquaredNorm(SplitPushforward(growing, p)));
    for (std::uint64_t s : sample) {
      growing.Add(s);
      const double now = std::sqrt(SquaredNorm(SplitPushforward(growing, p)));
      mono_fail += now <= prev * (1.0 + 1e-12) ? 0 : 1;
      prev = now;
    }
  }
  checks.push_back(Make(suite, "splitting preserves the l1 distance", l1_fail == 0,
                        "100 random (p, q, S), worst |difference| " + Fmt(worst_l1) +
                            " (tolerance 1e-12)"));
  checks.push_back(Make(suite, "the split l2 norm is nonincreasing as S grows", mono_fail == 0,
                        "100 nested chains, violations " + std::to_string(mono_fail)));

  for (std::uint64_t m0 : {5u, 20u, 100u}) {
    const std::size_t n = 50;
    const auto p = RandomDistribution(n, rng);
    std::vector<double> cdf(n);
    std::partial_sum(p.begin(), p.end(), cdf.begin());
    const int draws = 20000;
    double sum = 0.0;
    std::vector<std::uint64_t> sample(m0);
    for (int t = 0; t < draws; ++t) {
      for (auto& s : sample) {
        const double u = Uniform01(rng) * cdf.back();
        s = std::min<std::uint64_t>(n - 1, std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      }
      sum += SquaredNorm(SplitPushforward(BuildSplitMap(sample, n), p));
    }
    const double mean = sum / draws;
    checks.push_back(Make(suite, "E ||p_S||_2^2 <= 1.1 / m0 for S of m0 samples (m0=" + std::to_string(m0) + ")",
                          mean <= 1.1 / m0,
                          "mean " + Fmt(mean) + " over 20000 draws, bound " + Fmt(1.1 / m0)));
  }
  return checks;
}

std::vector<VerifyCheck> SquareEdgeSuite() {
  const std::string suite = "square-edge";
  std::vector<VerifyCheck> checks;
  SquareEdgeGadget t{0.0, 0.0, 1.0, GadgetVariant::kT};
  SquareEdgeGadget r{0.0, 0.0, 1.0, GadgetVariant::kR};
  double worst = 0.0;
  // 1000 points around the diamond, vertices included.
  for (int i = 0; i < 1000; ++i) {
    const double s = 4.0 * i / 1000.0;
    const int side = static_cast<int>(s);
    const double f = s - side;
    Point a(2);
    switch (side) {
      case 0: a = {f, 1.0 - f}; break;            // top to right
      case 1: a = {1.0 - f, -f}; break;           // right to bottom
      case 2: a = {-f, -1.0 + f}; break;          // bottom to left
      default: a = {-1.0 + f, f}; break;          // left to top
    }
    for (int quadrant = 1; quadrant <= 4; ++quadrant) {
      worst = std::max(worst, std::abs(GadgetQuadrantMass(t, a, quadrant) -
                                       GadgetQuadrantMass(r, a, quadrant)));
    }
  }
  checks.push_back(Make(suite, "T and R give equal mass to every open quadrant around an on-support point",
                        worst <= 1e-12,
                        "1000 support points x 4 quadrants, worst |T - R| " + Fmt(worst)));
  const Point upper_right{0.5, 0.5};
  const double ur_t = GadgetQuadrantMass(t, upper_right, 1);
  const double ur_r = GadgetQuadrantMass(r, upper_right, 1);
  checks.push_back(Make(suite, "quadrant {x > 1/2, y > 1/2} at (1/2, 1/2) has mass 0",
                        ur_t == 0.0 && ur_r == 0.0, "T " + Fmt(ur_t) + ", R " + Fmt(ur_r)));
  const Point top{0.0, 1.0};
  const double top_t = GadgetQuadrantMass(t, top, 2);
  const double top_r = GadgetQuadrantMass(r, top, 2);
  checks.push_back(Make(suite, "quadrant {x < 0, y < 1} at the top vertex has mass 1/2",
                        std::abs(top_t - 0.5) <= 1e-12 && std::abs(top_r - 0.5) <= 1e-12,
                        "T " + Fmt(top_t) + ", R " + Fmt(top_r)));
  return checks;
}

std::vector<VerifyCheck> OrderTupleSuite(std::uint64_t seed) {
  const std::string suite = "order-tuples";
  std::vector<VerifyCheck> checks;
  const std::int64_t n = 1000000;
  for (int m = 1; m <= 4; ++m) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(m)));
    const OrderTupleTvEstimate est = OrderTupleDistributionDistance(m, n, rng);
    const std::string detail = "N=1e6, estimate " + Fmt(est.estimate) + ", stderr " +
                               Fmt(est.standard_error) + ", raw " + Fmt(est.raw) + ", null mean " +
                               Fmt(est.null_mean);
    if (m <= 3) {
      const bool ok = std::abs(est.estimate) <= 3.0 * est.standard_error &&
                      est.estimate <= std::max(0.01, 3.0 * est.standard_error);
      checks.push_back(Make(suite,
                            "order tuples of MIX/MIX and the T/R coin mixture match for m=" +
                                std::to_string(m) + " (|estimate| <= 3 stderr)",
                            ok, detail));
    } else {
      checks.push_back(Make(suite, "control: the two order-tuple laws differ at m=4 (estimate > 5 stderr)",
                            est.estimate > 5.0 * est.standard_error, detail));
    }
  }
  return checks;
}

std::vector<VerifyCheck> RamseySuite(std::uint64_t seed) {
  const std::string suite = "ramsey";
  std::vector<VerifyCheck> checks;
  const std::uint64_t psi1 = ErdosSzekeresThreshold(3, 1);
  const std::uint64_t psi2 = ErdosSzekeresThreshold(3, 2);
  checks.push_back(Make(suite, "monotone-subsequence threshold (n-1)^(2^d)+1 gives 5 and 17 for n=3, d=1,2",
                        psi1 == 5 && psi2 == 17,
                        "psi(3,1)=" + std::to_string(psi1) + ", psi(3,2)=" + std::to_string(psi2)));
  Rng rng(seed);
  int missing = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<Point> pts(5, Point(2));
    for (auto& p : pts) p = {Uniform01(rng), Uniform01(rng)};
    const PointSet set(std::move(pts));
    if (!set.generic()) {
      --t;
      continue;
    }
    missing += FindDominatingTriple(set) ? 0 : 1;
  }
  checks.push_back(Make(suite, "every generic 5-point set in the plane has a point inside the box of two others",
                        missing == 0, "1000 random sets, without triple " + std::to_string(missing)));
  const PointSet witness({{1, 2}, {2, 4}, {3, 1}, {4, 3}});
  checks.push_back(Make(suite, "the 4-point set {(1,2),(2,4),(3,1),(4,3)} has no such triple",
                        !FindDominatingTriple(witness).has_value(), "exhaustive search"));
  return checks;
}

std::vector<VerifyCheck> PairMassSuite(std::uint64_t seed) {
  const std::string suite = "pair-mass";
  std::vector<VerifyCheck> checks;
  Rng rng(seed);
  for (int d = 1; d <= 2; ++d) {
    const double beta = ConstantMassBound(d);
    double worst = 1.0;
    int failures = 0;
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 1 + UniformIndex(8, rng);
      const auto w = RandomDistribution(n, rng);
      std::vector<std::pair<Point, double>> atoms;
      for (std::size_t i = 0; i < n; ++i) {
        Point x(d);
        for (auto& c : x) c = Uniform01(rng);
        atoms.push_back({x, w[i]});
      }
      const auto dist = DiscreteGridDistribution::FromPoints(atoms);
      const double e = PairBoxMassExpectation(dist);
      worst = std::min(worst, e);
      failures += e >= beta ? 0 : 1;
    }
    checks.push_back(Make(suite, "E D(R_{x,y}) >= (2^(2^(d-1))+1)^(-3) for distributions on <= 8 points (d=" +
                                     std::to_string(d) + ")",
                          failures == 0,
                          "100 random distributions, smallest expectation " + Fmt(worst) + ", bound " +
                              Fmt(beta)));
  }
  return checks;
}

std::vector<VerifyCheck> CarveSuite(std::uint64_t seed) {
  const std::string suite = "carve";
  std::vector<VerifyCheck> checks;
  Rng rng(seed);
  int count_fail = 0, partition_fail = 0;
  std::size_t most = 0;
  for (int t = 0; t < 1000; ++t) {
    const int d = 1 + t % 3;
    std::vector<double> olo(d), ohi(d), ilo(d), ihi(d);
    for (int a = 0; a < d; ++a) {
      olo[a] = static_cast<double>(UniformIndex(10, rng));
      ohi[a] = olo[a] + 1.0 + static_cast<double>(UniformIndex(10, rng));
      double u = olo[a] + Uniform01(rng) * (ohi[a] - olo[a]);
      double v = olo[a] + Uniform01(rng) * (ohi[a] - olo[a]);
      // Inner boxes touching the outer boundary are common on purpose.
      if (UniformIndex(4, rng) == 0) u = olo[a];
      if (UniformIndex(4, rng) == 0) v = ohi[a];
      ilo[a] = std::min(u, v);
      ihi[a] = std::max(u, v);
    }
    const AxisRectangle outer(olo, ohi), inner(ilo, ihi);
    const auto pieces = DecomposeComplement(outer, inner);
    most = std::max(most, pieces.size());
    count_fail += pieces.size() <= static_cast<std::size_t>(2 * d) ? 0 : 1;
    bool ok = true;
    for (const auto& piece : pieces) ok = ok && outer.Encloses(piece) && InteriorsDisjoint(piece, inner);
    for (std::size_t i = 0; ok && i < pieces.size(); ++i) {
      for (std::size_t j = i + 1; ok && j < pieces.size(); ++j) ok = InteriorsDisjoint(pieces[i], pieces[j]);
    }
    // Point-cloud measure: each cloud point of R \ inner lies in exactly one piece.
    Point z(d);
    for (int s = 0; ok && s < 200; ++s) {
      for (int a = 0; a < d; ++a) z[a] = olo[a] + Uniform01(rng) * (ohi[a] - olo[a]);
      int holders = 0;
      for (const auto& piece : pieces) holders += Contains(piece, z) ? 1 : 0;
      ok = holders == (Contains(inner, z) ? 0 : 1);
    }
    partition_fail += ok ? 0 : 1;
  }
  checks.push_back(Make(suite, "R minus an inner box splits into at most 2d boxes", count_fail == 0,
                        "1000 random pairs in d=1..3, most pieces " + std::to_string(most)));
  checks.push_back(Make(suite, "the pieces partition R minus the inner box under a 200-point cloud",
                        partition_fail == 0, "failures " + std::to_string(partition_fail)));
  return checks;
}

}  // namespace

std::vector<std::string> VerifySuiteNames() {
  return {"covering", "split", "square-edge", "order-tuples", "ramsey", "pair-mass", "carve"};
}

std::vector<VerifyCheck> RunVerifySuite(const std::string& name, std::uint64_t seed) {
  if (name == "covering") return CoveringSuite(seed);
  if (name == "split") return SplitSuite(seed);
  if (name == "square-edge") return SquareEdgeSuite();
  if (name == "order-tuples") return OrderTupleSuite(seed);
  if (name == "ramsey") return RamseySuite(seed);
  if (name == "pair-mass") return PairMassSuite(seed);
  if (name == "carve") return CarveSuite(seed);
  throw UsageError("unknown verify suite '" + name + "'");
}

}  // namespace aktest::cli
