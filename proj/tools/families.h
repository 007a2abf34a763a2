#ifndef AKTEST_TOOLS_FAMILIES_H_
#define AKTEST_TOOLS_FAMILIES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "aktest/distributions.h"
#include "aktest/geometry.h"

namespace aktest::cli {

// Integer cell [x0, x1) x [y0, y1) of the 64 x 64 histogram grid.
struct GridCell {
  int x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  int Area() const { return (x1 - x0) * (y1 - y0); }
};

inline constexpr int kHistogramGrid = 64;
inline constexpr int kHardAtomsPerEdge = 8;

// Splits the grid into k cells: the largest cell is cut across its longer
// side at a uniform position in its middle half, until k cells exist.
std::vector<GridCell> RandomGuillotinePartition(int k, Rng& rng);

// Histogram with the given per-cell masses spread evenly over each cell's
// integer points.
DiscreteGridDistribution HistogramOnCells(const std::vector<GridCell>& cells,
                                          const std::vector<double>& cell_mass);

struct InstancePair {
  std::string family;
  DiscreteGridDistribution p;
  DiscreteGridDistribution q;
  bool equal = true;  // p == q by construction
};

// Families:
//   uniform-grid       p = q uniform on {0..31}^2
//   random-histogram   p = q, k random-guillotine cells with masses ~ U[0.5, 1.5]
//   planted-histogram  common k-cell partition; half the cells form A, the rest B;
//                      p = u/2 + a/2, q = u/2 + b/2 with u uniform over cells and
//                      a, b uniform over the A and B cells: ||p - q||_1 = 1
//   point-mass         p = q = a single atom at (0, 0)
//   hard-equal         heavy/light diagonal instance, equal case, m = max(1, k/8),
//                      eps = 1, discretized with 8 atoms per gadget edge
//   hard-far           the same construction in the far case
std::vector<std::string> FamilyNames();
InstancePair MakeFamily(const std::string& family, int k, std::uint64_t seed);

}  // namespace aktest::cli

#endif  // AKTEST_TOOLS_FAMILIES_H_
