#ifndef AKTEST_VERDICT_H_
#define AKTEST_VERDICT_H_

#include <cstdint>
#include <string_view>

namespace aktest {

enum class Decision { kAccept, kReject };

inline std::string_view ToString(Decision d) {
  return d == Decision::kAccept ? "accept" : "reject";
}

// Outcome of one tester invocation. decision == kReject iff
// statistic >= threshold. `kappa` is the squared l2 accuracy the final
// l2 stage was run with.
struct TestVerdict {
  Decision decision = Decision::kAccept;
  double statistic = 0.0;
  double threshold = 0.0;
  std::int64_t samples_used = 0;
  double kappa = 0.0;

  bool rejected() const { return decision == Decision::kReject; }
};

inline Decision DecideByThreshold(double statistic, double threshold) {
  return statistic >= threshold ? Decision::kReject : Decision::kAccept;
}

}  // namespace aktest

#endif  // AKTEST_VERDICT_H_
