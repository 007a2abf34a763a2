#include "aktest/hardness.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace aktest {

namespace {

constexpr std::array<DiamondEdge, 4> kEdges = {DiamondEdge::kUpperLeft, DiamondEdge::kUpperRight,
                                               DiamondEdge::kLowerLeft, DiamondEdge::kLowerRight};

// Parameter range {t in [0, 1] : c0 + c1 t > 0} as [lo, hi] (empty if hi <= lo).
std::pair<double, double> PositiveRange(double c0, double c1) {
  if (c1 == 0.0) return c0 > 0.0 ? std::pair{0.0, 1.0} : std::pair{0.0, 0.0};
  const double root = -c0 / c1;
  if (c1 > 0.0) return {std::clamp(root, 0.0, 1.0), 1.0};
  return {0.0, std::clamp(root, 0.0, 1.0)};
}

// Quadrant signs (sx, sy): the quadrant is {sx (x - a_x) > 0, sy (y - a_y) > 0}.
std::pair<int, int> QuadrantSigns(int quadrant) {
  switch (quadrant) {
    case 1: return {+1, +1};
    case 2: return {-1, -1};
    case 3: return {+1, -1};
    case 4: return {-1, +1};
    default: throw UsageError("quadrant must lie in 1..4");
  }
}

// log(exp(t) - 1) for t > 0.
double LogExpm1(double t) {
  return t > 30.0 ? t + std::log1p(-std::exp(-t)) : std::log(std::expm1(t));
}

double LogAddExp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

std::uint64_t Factorial(int m) {
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

// Lehmer-code index of a 1-based permutation.
std::uint64_t PermutationIndex(const std::vector<std::uint32_t>& perm) {
  const std::size_t m = perm.size();
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::uint64_t smaller = 0;
    for (std::size_t j = i + 1; j < m; ++j) smaller += perm[j] < perm[i];
    index = index * (m - i) + smaller;
  }
  return index;
}

double PlugInTv(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                double n) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(static_cast<double>(a[i] - b[i]));
  return 0.5 * total / n;
}

std::vector<std::int64_t> Multinomial(std::int64_t n, const std::vector<double>& probs, Rng& rng) {
  std::vector<std::int64_t> counts(probs.size(), 0);
  double remaining_mass = 1.0;
  std::int64_t remaining = n;
  for (std::size_t i = 0; i < probs.size() && remaining > 0; ++i) {
    if (probs[i] <= 0.0) continue;
    const double share = std::min(1.0, probs[i] / remaining_mass);
    if (share >= 1.0) {
      counts[i] = remaining;
      remaining = 0;
      break;
    }
    std::binomial_distribution<std::int64_t> draw(remaining, share);
    counts[i] = draw(rng);
    remaining -= counts[i];
    remaining_mass -= probs[i];
  }
  return counts;
}

}  // namespace

std::string_view ToString(GadgetVariant variant) {
  switch (variant) {
    case GadgetVariant::kT: return "T";
    case GadgetVariant::kR: return "R";
    case GadgetVariant::kMix: return "MIX";
  }
  return "?";
}

std::array<Point, 2> SquareEdgeGadget::Edge(DiamondEdge edge) const {
  const Point left{cx - radius, cy}, top{cx, cy + radius}, right{cx + radius, cy},
      bottom{cx, cy - radius};
  switch (edge) {
    case DiamondEdge::kUpperLeft: return {left, top};
    case DiamondEdge::kUpperRight: return {top, right};
    case DiamondEdge::kLowerLeft: return {left, bottom};
    case DiamondEdge::kLowerRight: return {bottom, right};
  }
  throw UsageError("unknown diamond edge");
}

double SquareEdgeGadget::EdgeWeight(DiamondEdge edge) const {
  const bool t_edge = edge == DiamondEdge::kUpperLeft || edge == DiamondEdge::kLowerRight;
  switch (variant) {
    case GadgetVariant::kT: return t_edge ? 0.5 : 0.0;
    case GadgetVariant::kR: return t_edge ? 0.0 : 0.5;
    case GadgetVariant::kMix: return 0.25;
  }
  return 0.0;
}

bool SquareEdgeGadget::OnSupport(double x, double y, double tolerance) const {
  return std::abs(std::abs(x - cx) + std::abs(y - cy) - radius) <= tolerance;
}

Point GadgetSample(const SquareEdgeGadget& gadget, Rng& rng) {
  if (!(gadget.radius > 0.0)) throw UsageError("gadget radius must be positive");
  DiamondEdge edge;
  switch (gadget.variant) {
    case GadgetVariant::kT:
      edge = UniformIndex(2, rng) == 0 ? DiamondEdge::kUpperLeft : DiamondEdge::kLowerRight;
      break;
    case GadgetVariant::kR:
      edge = UniformIndex(2, rng) == 0 ? DiamondEdge::kUpperRight : DiamondEdge::kLowerLeft;
      break;
    default:
      edge = kEdges[UniformIndex(4, rng)];
      break;
  }
  const auto [a, b] = gadget.Edge(edge);
  const double t = Uniform01(rng);
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
}

DiamondEdge EdgeOf(const SquareEdgeGadget& gadget, std::span<const double> point) {
  const bool left = point[0] < gadget.cx;
  const bool up = point[1] > gadget.cy;
  if (up) return left ? DiamondEdge::kUpperLeft : DiamondEdge::kUpperRight;
  return left ? DiamondEdge::kLowerLeft : DiamondEdge::kLowerRight;
}

double GadgetRegionMass(const SquareEdgeGadget& gadget, std::span<const double> a, int quadrant) {
  if (a.size() != 2) throw UsageError("gadget quadrant: corner must be a 2-D point");
  const auto [sx, sy] = QuadrantSigns(quadrant);
  double mass = 0.0;
  for (DiamondEdge edge : kEdges) {
    const double w = gadget.EdgeWeight(edge);
    if (w == 0.0) continue;
    const auto [p0, p1] = gadget.Edge(edge);
    const auto [xlo, xhi] = PositiveRange(sx * (p0[0] - a[0]), sx * (p1[0] - p0[0]));
    const auto [ylo, yhi] = PositiveRange(sy * (p0[1] - a[1]), sy * (p1[1] - p0[1]));
    const double len = std::min(xhi, yhi) - std::max(xlo, ylo);
    if (len > 0.0) mass += w * len;
  }
  return mass;
}

double GadgetQuadrantMass(const SquareEdgeGadget& gadget, std::span<const double> a, int quadrant) {
  if (a.size() != 2) throw UsageError("gadget quadrant: corner must be a 2-D point");
  if (!gadget.OnSupport(a[0], a[1])) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "gadget quadrant: point (" << a[0] << ", " << a[1] << ") is not on the diamond";
    throw UsageError(msg.str());
  }
  return GadgetRegionMass(gadget, a, quadrant);
}

OrderTuple MakeOrderTuple(std::span<const LabeledSample> samples) {
  std::vector<double> xs, ys;
  OrderTuple tuple;
  for (const auto& s : samples) {
    if (s.point.size() != 2) throw UsageError("order tuple: samples must be 2-D");
    xs.push_back(s.point[0]);
    ys.push_back(s.point[1]);
    tuple.labels.push_back(s.label);
  }
  tuple.sigma_x = StrictRanks<double>(xs);
  tuple.sigma_y = StrictRanks<double>(ys);
  return tuple;
}

std::uint64_t OrderTupleCellCount(int m) {
  if (m < 1 || m > 8) throw UsageError("order tuple size must lie in 1..8");
  const std::uint64_t f = Factorial(m);
  return f * f * (std::uint64_t{1} << m);
}

std::uint64_t OrderTupleCode(const OrderTuple& tuple) {
  const int m = static_cast<int>(tuple.labels.size());
  if (tuple.sigma_x.size() != tuple.labels.size() || tuple.sigma_y.size() != tuple.labels.size()) {
    throw UsageError("order tuple: lengths differ");
  }
  const std::uint64_t f = Factorial(m);
  std::uint64_t bits = 0;
  for (int i = 0; i < m; ++i) {
    if (tuple.labels[i] == Label::kQ) bits |= std::uint64_t{1} << i;
  }
  return ((PermutationIndex(tuple.sigma_x) * f) + PermutationIndex(tuple.sigma_y)) * (1u << m) +
         bits;
}

OrderTuple SampleOrderTuple(const SquareEdgeGadget& p, const SquareEdgeGadget& q, int m, Rng& rng) {
  std::vector<LabeledSample> samples(static_cast<std::size_t>(m));
  for (auto& s : samples) {
    s.label = UniformIndex(2, rng) == 0 ? Label::kP : Label::kQ;
    s.point = GadgetSample(s.label == Label::kP ? p : q, rng);
  }
  return MakeOrderTuple(samples);
}

OrderTupleTvEstimate OrderTupleDistributionDistance(int m, std::int64_t n, Rng& rng,
                                                    int replicates) {
  if (n < 1) throw UsageError("order tuple TV: N must be >= 1");
  if (replicates < 2) throw UsageError("order tuple TV: need at least 2 null replicates");
  const std::size_t cells = OrderTupleCellCount(m);
  SquareEdgeGadget mix{0.0, 0.0, 1.0, GadgetVariant::kMix};
  SquareEdgeGadget t{0.0, 0.0, 1.0, GadgetVariant::kT};
  SquareEdgeGadget r{0.0, 0.0, 1.0, GadgetVariant::kR};

  std::vector<std::int64_t> yes(cells, 0), no(cells, 0);
  for (std::int64_t i = 0; i < n; ++i) ++yes[OrderTupleCode(SampleOrderTuple(mix, mix, m, rng))];
  for (std::int64_t i = 0; i < n; ++i) {
    const bool swap = UniformIndex(2, rng) == 1;
    ++no[OrderTupleCode(swap ? SampleOrderTuple(r, t, m, rng) : SampleOrderTuple(t, r, m, rng))];
  }

  const double nd = static_cast<double>(n);
  OrderTupleTvEstimate out;
  out.raw = PlugInTv(yes, no, nd);
  std::vector<double> pooled(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    pooled[c] = static_cast<double>(yes[c] + no[c]) / (2.0 * nd);
  }
  std::vector<double> null_tv;
  for (int rep = 0; rep < replicates; ++rep) {
    null_tv.push_back(PlugInTv(Multinomial(n, pooled, rng), Multinomial(n, pooled, rng), nd));
  }
  out.null_mean = std::accumulate(null_tv.begin(), null_tv.end(), 0.0) / replicates;
  double var = 0.0;
  for (double v : null_tv) var += (v - out.null_mean) * (v - out.null_mean);
  out.standard_error = std::sqrt(var / (replicates - 1));
  out.estimate = out.raw - out.null_mean;
  return out;
}

SquareEdgeGadget HardInstance::GadgetFor(int square, GadgetVariant variant) const {
  return {square + 0.5, square + 0.5, 0.5, variant};
}

std::vector<WeightedGadget> HardInstance::PSide() const {
  std::vector<WeightedGadget> out;
  for (int i = 0; i < r; ++i) {
    const DiagonalSquare& s = squares[i];
    if (s.heavy) {
      out.push_back({GadgetFor(i, GadgetVariant::kMix), 1.0 / m});
    } else if (equal_case) {
      out.push_back({GadgetFor(i, GadgetVariant::kMix), eps / k});
    } else {
      out.push_back({GadgetFor(i, s.p_gets_t ? GadgetVariant::kT : GadgetVariant::kR), eps / k});
    }
  }
  return out;
}

std::vector<WeightedGadget> HardInstance::QSide() const {
  std::vector<WeightedGadget> out;
  for (int i = 0; i < r; ++i) {
    const DiagonalSquare& s = squares[i];
    if (s.heavy) {
      out.push_back({GadgetFor(i, GadgetVariant::kMix), 1.0 / m});
    } else if (equal_case) {
      out.push_back({GadgetFor(i, GadgetVariant::kMix), eps / k});
    } else {
      out.push_back({GadgetFor(i, s.p_gets_t ? GadgetVariant::kR : GadgetVariant::kT), eps / k});
    }
  }
  return out;
}

int HardInstance::HeavyCount() const {
  return static_cast<int>(std::count_if(squares.begin(), squares.end(),
                                        [](const DiagonalSquare& s) { return s.heavy; }));
}

int HardInstance::LightCount() const { return r - HeavyCount(); }

double HardInstance::TotalMass() const { return HeavyCount() / m + LightCount() * eps / k; }

double HardInstance::PlantedDiscrepancy() const {
  const auto p_side = PSide();
  const auto q_side = QSide();
  double p_total = 0.0, q_total = 0.0;
  for (const auto& g : p_side) p_total += g.mass;
  for (const auto& g : q_side) q_total += g.mass;
  double total = 0.0;
  for (int i = 0; i < r; ++i) {
    if (squares[i].heavy) continue;
    const Point center{p_side[i].gadget.cx, p_side[i].gadget.cy};
    for (int quadrant = 1; quadrant <= 4; ++quadrant) {
      const double pm = p_side[i].mass * GadgetRegionMass(p_side[i].gadget, center, quadrant);
      const double qm = q_side[i].mass * GadgetRegionMass(q_side[i].gadget, center, quadrant);
      total += std::abs(pm / p_total - qm / q_total);
    }
  }
  return total;
}

std::vector<AxisRectangle> HardInstance::PlantedRectangles() const {
  std::vector<AxisRectangle> out;
  for (int i = 0; i < r; ++i) {
    if (squares[i].heavy) continue;
    const double lo = i, mid = i + 0.5, hi = i + 1.0;
    out.emplace_back(Point{mid, mid}, Point{hi, hi});  // quadrant 1
    out.emplace_back(Point{lo, lo}, Point{mid, mid});  // quadrant 2
    out.emplace_back(Point{mid, lo}, Point{hi, mid});  // quadrant 3
    out.emplace_back(Point{lo, mid}, Point{mid, hi});  // quadrant 4
  }
  return out;
}

HardInstance GenHardInstance(int k, double m, double eps, bool equal_case, std::uint64_t seed) {
  if (k < 2) throw UsageError("gen_hard_instance: k must be >= 2");
  if (!(m > 0.0) || !(m < k / 2.0)) {
    throw UsageError("gen_hard_instance: need 0 < m < k/2");
  }
  if (!(eps > 0.0 && eps <= 1.0)) throw UsageError("gen_hard_instance: eps must lie in (0, 1]");
  HardInstance inst;
  inst.equal_case = equal_case;
  inst.k = k;
  inst.m = m;
  inst.eps = eps;
  inst.seed = seed;
  inst.r = static_cast<int>(std::ceil(kSquaresPerK * k));
  Rng rng(seed);
  const double heavy_probability = m / k;
  for (int i = 0; i < inst.r; ++i) {
    DiagonalSquare s;
    s.heavy = Uniform01(rng) < heavy_probability;
    s.p_gets_t = UniformIndex(2, rng) == 0;
    inst.squares.push_back(s);
  }
  return inst;
}

DiscreteGridDistribution DiscretizeSide(const std::vector<WeightedGadget>& side,
                                        int atoms_per_edge) {
  if (atoms_per_edge < 1) throw UsageError("DiscretizeSide: atoms_per_edge must be >= 1");
  std::vector<std::pair<Point, double>> atoms;
  for (const auto& [gadget, mass] : side) {
    for (DiamondEdge edge : kEdges) {
      const double w = gadget.EdgeWeight(edge);
      if (w == 0.0 || mass == 0.0) continue;
      const auto [a, b] = gadget.Edge(edge);
      for (int j = 0; j < atoms_per_edge; ++j) {
        const double t = (j + 0.5) / atoms_per_edge;
        atoms.push_back({Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])},
                         mass * w / atoms_per_edge});
      }
    }
  }
  return DiscreteGridDistribution::FromPoints(atoms);
}

double MonotoneMap::Lambda3() const { return std::exp(log_lambda3); }

double MonotoneMap::LogApply(double x) const {
  return LogAddExp(x * std::exp(lambda1) + lambda2, log_lambda3);
}

double MonotoneMap::Apply(double x) const {
  const double log_f = LogApply(x);
  if (!(log_f < std::log(std::numeric_limits<double>::max()))) {
    std::ostringstream msg;
    msg << "monotone map: f(" << x << ") = exp(" << log_f << ") exceeds the double range";
    throw OverflowError(msg.str());
  }
  return std::exp(x * std::exp(lambda1) + lambda2) + Lambda3();
}

PreciseReal MonotoneMap::PreciseApply(double x) const {
  using boost::multiprecision::exp;
  PreciseReal value = exp(PreciseReal(x) * exp(PreciseReal(lambda1)) + PreciseReal(lambda2));
  if (log_lambda3 != -std::numeric_limits<double>::infinity()) {
    value += exp(PreciseReal(log_lambda3));
  }
  return value;
}

MonotoneMap SampleMonotoneMap(double w, Rng& rng) {
  if (!(w > std::exp(std::exp(1.0)))) throw UsageError("monotone map: W must exceed e^e");
  const double log_w = std::log(w);
  const double loglog_w = std::log(log_w);
  const double cube = log_w * log_w * log_w;
  MonotoneMap f;
  f.w = w;
  f.lambda1 = loglog_w + Uniform01(rng) * loglog_w;
  f.lambda2 = Uniform01(rng) * cube;
  const double u3 = Uniform01(rng);
  f.log_lambda3 =
      u3 > 0.0 ? std::log(u3) + 2.0 * cube : -std::numeric_limits<double>::infinity();
  return f;
}

std::array<double, 3> TripleCoordinates(const MonotoneMap& f, double a, double b, double c) {
  if (!(a < b && b < c)) throw UsageError("triple coordinates: need a < b < c");
  const double e = std::exp(f.lambda1);
  const double log_w = std::log(f.w);
  const double cube = log_w * log_w * log_w;
  const double log_a = LogExpm1((c - a) * e) - LogExpm1((b - a) * e);
  const double log_b = a * e + LogExpm1((b - a) * e) + f.lambda2;
  const double c_norm = std::exp(a * e + f.lambda2 - 2.0 * cube) + std::exp(f.log_lambda3 - 2.0 * cube);
  return {std::log(log_a), log_b, c_norm};
}

double TripleObfuscationTv(double w, std::array<double, 3> first, std::array<double, 3> second,
                           std::int64_t n, Rng& rng) {
  if (n < 1) throw UsageError("triple obfuscation: n must be >= 1");
  const double log_w = std::log(w);
  const double loglog_w = std::log(log_w);
  const double cube = log_w * log_w * log_w;
  constexpr int kBins1 = 40, kBins2 = 8, kBins3 = 4;
  auto bin = [](double u, double lo, double hi, int bins) {
    const int b = static_cast<int>(std::floor((u - lo) / (hi - lo) * bins));
    return std::clamp(b, 0, bins - 1);
  };
  auto histogram = [&](const std::array<double, 3>& t) {
    std::vector<std::int64_t> h(kBins1 * kBins2 * kBins3, 0);
    for (std::int64_t i = 0; i < n; ++i) {
      const MonotoneMap f = SampleMonotoneMap(w, rng);
      const auto v = TripleCoordinates(f, t[0], t[1], t[2]);
      const int b1 = bin((v[0] - loglog_w) / loglog_w, -1.0, 1.5, kBins1);
      const int b2 = bin(v[1] / cube, -0.25, 1.25, kBins2);
      const int b3 = bin(v[2], 0.0, 1.0, kBins3);
      ++h[(b1 * kBins2 + b2) * kBins3 + b3];
    }
    return h;
  };
  const auto h1 = histogram(first);
  const auto h2 = histogram(second);
  return PlugInTv(h1, h2, static_cast<double>(n));
}

}  // namespace aktest
