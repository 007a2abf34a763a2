#ifndef AKTEST_TOOLS_COMMANDS_H_
#define AKTEST_TOOLS_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace aktest::cli {

inline constexpr int kExitAccept = 0;
inline constexpr int kExitReject = 1;
inline constexpr int kExitUsage = 2;

// Options shared by the tester-running commands.
struct TesterOptions {
  std::uint64_t seed = 0;
  std::optional<std::string> mode;
  std::optional<std::string> constants_file;
  std::optional<double> budget_multiplier;
};

struct TestCommand {
  std::string p_spec;
  std::string q_spec;
  int k = 2;
  double eps = 1.0;
  bool tv = false;  // eps is a total-variation distance between k-histograms
  TesterOptions tester;
};

struct OracleCommand {
  std::string p_spec;
  std::string q_spec;
  int k = 1;
};

struct GenHardCommand {
  int k = 0;
  double m = 0.0;
  double eps = 1.0;
  std::string hard_case = "far";  // equal or far
  std::uint64_t seed = 0;
  std::string out_dir;
  int atoms_per_edge = 8;
};

struct ExperimentCommand {
  std::string config_file;
  std::optional<std::string> out;
  std::optional<std::int64_t> trials;
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> constants_file;
};

struct VerifyCommand {
  std::string suite;  // a suite name or "all"
  std::uint64_t seed = 0;
};

// Each command writes its report to `out`, diagnostics to `err`, and returns
// the process exit code: 0 accept / success, 1 reject / failed assertion,
// 2 usage, parse or I/O error.
int RunTestCommand(const TestCommand& cmd, std::ostream& out, std::ostream& err);
int RunOracleCommand(const OracleCommand& cmd, std::ostream& out, std::ostream& err);
int RunGenHardCommand(const GenHardCommand& cmd, std::ostream& out, std::ostream& err);
int RunExperimentCommand(const ExperimentCommand& cmd, std::ostream& out, std::ostream& err);
int RunVerifyCommand(const VerifyCommand& cmd, std::ostream& out, std::ostream& err);

}  // namespace aktest::cli

#endif  // AKTEST_TOOLS_COMMANDS_H_
