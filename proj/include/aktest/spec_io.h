#ifndef AKTEST_SPEC_IO_H_
#define AKTEST_SPEC_IO_H_

#include <string>
#include <string_view>

#include "aktest/distributions.h"

namespace aktest {

// Distribution-spec document (JSON):
//   {"dim": d, "axes": [[c, ...], ...],
//    "mass": [{"idx": [i, ...], "w": w}, ...], "normalized": bool}
// Coordinates and masses may be JSON numbers or decimal strings; both are
// converted to the nearest binary64. With "normalized": true the total mass
// must be 1 within kNormalizationTolerance.
DiscreteGridDistribution ParseDistributionSpec(std::string_view text);
DiscreteGridDistribution LoadDistributionSpec(const std::string& path);

// Shortest round-trip decimal output; identical inputs give identical bytes.
std::string SerializeDistributionSpec(const DiscreteGridDistribution& dist);

}  // namespace aktest

#endif  // AKTEST_SPEC_IO_H_
