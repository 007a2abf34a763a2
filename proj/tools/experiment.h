#ifndef AKTEST_TOOLS_EXPERIMENT_H_
#define AKTEST_TOOLS_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "aktest/tester.h"

namespace aktest::cli {

inline constexpr const char* kResultsSchema = "aktest-results-v1";
inline constexpr const char* kResultsHeader =
    "schema,trial,seed,family,k,d,eps,m,verdict,statistic,threshold,wall_ms";

enum class ExperimentTest { kAk, kTv };

// A sweep over families x k x eps x budget multipliers, `trials` trials per
// cell. Trial t of every cell uses seed DeriveSeed(seed, t), so cells that
// differ only in the budget multiplier see the same instances.
struct ExperimentConfig {
  ExperimentTest test = ExperimentTest::kAk;
  std::vector<std::string> families;
  std::vector<int> ks;
  std::vector<double> eps;
  std::vector<double> budget_multipliers{1.0};
  std::int64_t trials = 1;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool timing = false;
  // Mode and constants; k, d, eps and budget_multiplier are set per cell.
  TesterConfig base;

  void Validate() const;
};

// Parses the experiment config document:
//   {"test": "ak"|"tv", "families": [...], "k": [...], "eps": [...],
//    "budget_multiplier": [...], "trials": n, "seed": s, "jobs": j,
//    "timing": bool, "mode": "paper"|"practical", "constants": {...}}
// "family" may replace "families"; scalars are accepted for list fields.
// `seed` and `trials` are required.
ExperimentConfig ParseExperimentConfig(const nlohmann::json& doc);
ExperimentConfig LoadExperimentConfig(const std::string& path);

// The resolved configuration, as written to the sidecar snapshot.
nlohmann::json ExperimentConfigToJson(const ExperimentConfig& cfg);

struct ResultRow {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  std::string family;  // family name, plus "@x<multiplier>" when it is not 1
  int k = 0;
  int d = 0;
  double eps = 0.0;
  std::int64_t samples_used = 0;
  std::string verdict;  // accept, reject or error
  std::optional<double> statistic;
  std::optional<double> threshold;
  std::int64_t wall_ms = 0;
  std::string error;
};

struct CellSummary {
  std::string family;
  int k = 0;
  double eps = 0.0;
  double budget_multiplier = 1.0;
  std::int64_t trials = 0;
  std::int64_t accepts = 0;
  std::int64_t errors = 0;
  double accept_rate = 0.0;  // accepts / (trials - errors)
  double ci_low = 0.0;       // Wilson 95% interval
  double ci_high = 0.0;
  double mean_samples = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;  // cell-major, trial index ascending
  std::vector<CellSummary> cells;
};

// Runs every trial on `cfg.jobs` worker threads. A trial that throws yields
// an error row; the sweep continues.
ExperimentResult RunExperiment(const ExperimentConfig& cfg);

std::string FormatCsv(const std::vector<ResultRow>& rows);
std::string FormatSummaryLine(const CellSummary& cell);

// Wilson score interval for `successes` out of `n` at z = 1.96.
std::pair<double, double> WilsonInterval(std::int64_t successes, std::int64_t n);

}  // namespace aktest::cli

#endif  // AKTEST_TOOLS_EXPERIMENT_H_
