#include "families.h"

#include <algorithm>
#include <numeric>

#include "aktest/hardness.h"

namespace aktest::cli {

std::vector<GridCell> RandomGuillotinePartition(int k, Rng& rng) {
  if (k < 1 || k > kHistogramGrid * kHistogramGrid) {
    throw UsageError("guillotine partition: k must lie in [1, 4096]");
  }
  std::vector<GridCell> cells{{0, kHistogramGrid, 0, kHistogramGrid}};
  while (static_cast<int>(cells.size()) < k) {
    const auto largest = std::max_element(
        cells.begin(), cells.end(), [](const GridCell& a, const GridCell& b) {
          return a.Area() < b.Area();
        });
    GridCell cell = *largest;
    const bool cut_x = (cell.x1 - cell.x0) >= (cell.y1 - cell.y0);
    const int lo = cut_x ? cell.x0 : cell.y0;
    const int hi = cut_x ? cell.x1 : cell.y1;
    const int width = hi - lo;
    const int from = lo + std::max(1, width / 4);
    const int to = hi - std::max(1, width / 4);
    const int cut = from + static_cast<int>(UniformIndex(static_cast<std::size_t>(to - from + 1), rng));
    GridCell a = cell, b = cell;
    if (cut_x) {
      a.x1 = cut;
      b.x0 = cut;
    } else {
      a.y1 = cut;
      b.y0 = cut;
    }
    *largest = a;
    cells.push_back(b);
  }
  return cells;
}

DiscreteGridDistribution HistogramOnCells(const std::vector<GridCell>& cells,
                                          const std::vector<double>& cell_mass) {
  std::vector<std::pair<Point, double>> atoms;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const GridCell& cell = cells[c];
    const double each = cell_mass[c] / cell.Area();
    for (int x = cell.x0; x < cell.x1; ++x) {
      for (int y = cell.y0; y < cell.y1; ++y) atoms.push_back({Point{double(x), double(y)}, each});
    }
  }
  return DiscreteGridDistribution::FromPoints(atoms);
}

std::vector<std::string> FamilyNames() {
  return {"uniform-grid", "random-histogram", "planted-histogram", "point-mass", "hard-equal", "hard-far"};
}

InstancePair MakeFamily(const std::string& family, int k, std::uint64_t seed) {
  Rng rng(seed);
  if (family == "uniform-grid") {
    std::vector<std::pair<Point, double>> atoms;
    for (int x = 0; x < 32; ++x) {
      for (int y = 0; y < 32; ++y) atoms.push_back({Point{double(x), double(y)}, 1.0 / 1024});
    }
    auto d = DiscreteGridDistribution::FromPoints(atoms);
    return {family, d, d, true};
  }
  if (family == "random-histogram") {
    const auto cells = RandomGuillotinePartition(k, rng);
    std::vector<double> mass(cells.size());
    for (auto& w : mass) w = 0.5 + Uniform01(rng);
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    for (auto& w : mass) w /= total;
    auto d = HistogramOnCells(cells, mass);
    return {family, d, d, true};
  }
  if (family == "planted-histogram") {
    if (k < 2 || k % 2 != 0) throw UsageError("planted-histogram: k must be even and >= 2");
    const auto cells = RandomGuillotinePartition(k, rng);
    std::vector<int> order(cells.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> in_a(cells.size(), false);
    for (int i = 0; i < k / 2; ++i) in_a[order[i]] = true;
    std::vector<double> pm(cells.size()), qm(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double base = 0.5 / k;
      pm[c] = base + (in_a[c] ? 1.0 / k : 0.0);
      qm[c] = base + (in_a[c] ? 0.0 : 1.0 / k);
    }
    return {family, HistogramOnCells(cells, pm), HistogramOnCells(cells, qm), false};
  }
  if (family == "point-mass") {
    std::vector<std::pair<Point, double>> atom{{Point{0.0, 0.0}, 1.0}};
    auto d = DiscreteGridDistribution::FromPoints(atom);
    return {family, d, d, true};
  }
  if (family == "hard-equal" || family == "hard-far") {
    const bool equal = family == "hard-equal";
    const HardInstance inst = GenHardInstance(k, std::max(1.0, k / 8.0), 1.0, equal, seed);
    return {family, DiscretizeSide(inst.PSide(), kHardAtomsPerEdge),
            DiscretizeSide(inst.QSide(), kHardAtomsPerEdge), equal};
  }
  throw UsageError("unknown instance family '" + family + "'");
}

}  // namespace aktest::cli
