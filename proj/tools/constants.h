#ifndef AKTEST_TOOLS_CONSTANTS_H_
#define AKTEST_TOOLS_CONSTANTS_H_

#include <string>

#include "json.hpp"

#include "aktest/tester.h"

namespace aktest::cli {

// Overwrites the tester constants named in `doc`. Recognized keys:
//   mode, budget_constant, kappa_constant, alpha_constant, alpha_override,
//   alpha_effective, consistency_constant, s_multiplier, budget_multiplier,
//   c_r, c_f, repetitions.
// Unknown keys and wrongly typed values are UsageErrors.
void ApplyConstants(const nlohmann::json& doc, TesterConfig& cfg);

// Reads a constants file and applies it; UsageError on I/O or parse failure.
void ApplyConstantsFile(const std::string& path, TesterConfig& cfg);

// All constants of `cfg` under the keys ApplyConstants reads.
nlohmann::json ConstantsToJson(const TesterConfig& cfg);

}  // namespace aktest::cli

#endif  // AKTEST_TOOLS_CONSTANTS_H_
