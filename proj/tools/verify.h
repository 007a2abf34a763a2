#ifndef AKTEST_TOOLS_VERIFY_H_
#define AKTEST_TOOLS_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

namespace aktest::cli {

// One assertion of an invariant suite.
struct VerifyCheck {
  std::string suite;
  std::string property;  // the statement being checked
  bool passed = false;
  std::string detail;    // counts, worst observed values
};

// covering, split, square-edge, order-tuples, ramsey, pair-mass, carve.
std::vector<std::string> VerifySuiteNames();

// Runs one suite with generators seeded from `seed`. Throws UsageError for
// unknown names.
std::vector<VerifyCheck> RunVerifySuite(const std::string& name, std::uint64_t seed);

}  // namespace aktest::cli

#endif  // AKTEST_TOOLS_VERIFY_H_
