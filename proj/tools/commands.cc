#include "commands.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "json.hpp"

#include "aktest/hardness.h"
#include "aktest/oracle.h"
#include "aktest/spec_io.h"
#include "aktest/tester.h"
#include "constants.h"
#include "experiment.h"
#include "verify.h"

namespace aktest::cli {

namespace {

using OrderedJson = nlohmann::ordered_json;

nlohmann::ordered_json RectJson(const AxisRectangle& rect) {
  return {{"lo", rect.lo()}, {"hi", rect.hi()}};
}

// Writes `text` to `path` through a temporary file and a rename.
void WriteFileAtomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write '" + tmp + "'");
    out << text;
    out.flush();
    if (!out) throw UsageError("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw UsageError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

TesterConfig ResolveTesterConfig(const TesterOptions& opts, int k, int d, double eps) {
  TesterConfig cfg = PracticalDefaults(k, d, eps);
  if (opts.constants_file) ApplyConstantsFile(*opts.constants_file, cfg);
  if (opts.mode) cfg.mode = ParseTesterMode(*opts.mode);
  if (opts.budget_multiplier) cfg.budget_multiplier = *opts.budget_multiplier;
  cfg.k = k;
  cfg.d = d;
  cfg.eps = eps;
  return cfg;
}

}  // namespace

int RunTestCommand(const TestCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    const DiscreteGridDistribution p = LoadDistributionSpec(cmd.p_spec);
    const DiscreteGridDistribution q = LoadDistributionSpec(cmd.q_spec);
    if (p.dim() != q.dim()) {
      throw UsageError("dimension mismatch: p has d=" + std::to_string(p.dim()) + ", q has d=" +
                       std::to_string(q.dim()));
    }
    if (!(p.TotalMass() > 0.0) || !(q.TotalMass() > 0.0)) {
      throw UsageError("both distributions need positive total mass");
    }
    TesterConfig cfg = ResolveTesterConfig(cmd.tester, cmd.k, static_cast<int>(p.dim()), cmd.eps);
    const GridSampler ps(p), qs(q);
    Rng rng(cmd.tester.seed);
    const TestVerdict v = cmd.tv ? TvHistogramTest(ps, qs, cfg, rng) : AkClosenessTest(ps, qs, cfg, rng);
    OrderedJson line;
    line["verdict"] = std::string(ToString(v.decision));
    line["statistic"] = v.statistic;
    line["threshold"] = v.threshold;
    line["samples_used"] = v.samples_used;
    line["kappa"] = v.kappa;
    line["k"] = cfg.k;
    line["d"] = cfg.d;
    line["eps"] = cfg.eps;
    line["distance"] = cmd.tv ? "tv" : "ak";
    line["mode"] = std::string(ToString(cfg.mode));
    line["budget_multiplier"] = cfg.budget_multiplier;
    line["seed"] = cmd.tester.seed;
    out << line.dump() << '\n';
    return v.rejected() ? kExitReject : kExitAccept;
  } catch (const std::exception& e) {
    err << "aktest test: " << e.what() << '\n';
    return kExitUsage;
  }
}

int RunOracleCommand(const OracleCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    const DiscreteGridDistribution p = LoadDistributionSpec(cmd.p_spec);
    const DiscreteGridDistribution q = LoadDistributionSpec(cmd.q_spec);
    if (p.dim() != q.dim()) throw UsageError("dimension mismatch between p and q");
    OrderedJson line;
    try {
      const AkDistanceResult res = AkDistanceBruteForce(p, q, cmd.k);
      line["value"] = res.value;
      line["k"] = cmd.k;
      line["method"] = "branch-and-bound";
      OrderedJson family = OrderedJson::array();
      for (const auto& rect : res.family.rects) family.push_back(RectJson(rect));
      line["family"] = family;
      line["disjoint"] = res.family.disjoint;
    } catch (const InfeasibleError& e) {
      if (p.dim() != 1) throw;
      line["value"] = AkDistance1d(p, q, cmd.k);
      line["k"] = cmd.k;
      line["method"] = "interval-dp";
      line["family"] = nullptr;
      line["note"] = std::string("branch-and-bound skipped: ") + e.what();
    }
    out << line.dump() << '\n';
    return kExitAccept;
  } catch (const std::exception& e) {
    err << "aktest oracle: " << e.what() << '\n';
    return kExitUsage;
  }
}

int RunGenHardCommand(const GenHardCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    if (cmd.hard_case != "equal" && cmd.hard_case != "far") {
      throw UsageError("--case must be 'equal' or 'far'");
    }
    if (cmd.atoms_per_edge < 1) throw UsageError("--atoms-per-edge must be >= 1");
    if (cmd.out_dir.empty()) throw UsageError("--out directory is required");
    const bool equal = cmd.hard_case == "equal";
    const HardInstance inst = GenHardInstance(cmd.k, cmd.m, cmd.eps, equal, cmd.seed);
    const std::string p_text = SerializeDistributionSpec(DiscretizeSide(inst.PSide(), cmd.atoms_per_edge));
    const std::string q_text = SerializeDistributionSpec(DiscretizeSide(inst.QSide(), cmd.atoms_per_edge));

    OrderedJson meta;
    meta["equal_case"] = inst.equal_case;
    meta["seed"] = inst.seed;
    meta["k"] = inst.k;
    meta["m"] = inst.m;
    meta["eps"] = inst.eps;
    meta["r"] = inst.r;
    meta["atoms_per_edge"] = cmd.atoms_per_edge;
    meta["heavy_count"] = inst.HeavyCount();
    meta["light_count"] = inst.LightCount();
    meta["heavy_mass"] = 1.0 / inst.m;
    meta["light_mass"] = inst.eps / inst.k;
    meta["total_mass"] = inst.TotalMass();
    meta["planted_discrepancy"] = inst.PlantedDiscrepancy();
    const auto p_side = inst.PSide();
    const auto q_side = inst.QSide();
    OrderedJson squares = OrderedJson::array();
    for (int i = 0; i < inst.r; ++i) {
      squares.push_back({{"index", i},
                         {"box", RectJson(AxisRectangle({double(i), double(i)}, {i + 1.0, i + 1.0}))},
                         {"heavy", inst.squares[i].heavy},
                         {"p", std::string(ToString(p_side[i].gadget.variant))},
                         {"q", std::string(ToString(q_side[i].gadget.variant))}});
    }
    meta["squares"] = squares;

    std::error_code ec;
    std::filesystem::create_directories(cmd.out_dir, ec);
    if (ec) throw UsageError("cannot create '" + cmd.out_dir + "': " + ec.message());
    const std::filesystem::path dir(cmd.out_dir);
    WriteFileAtomically((dir / "p.json").string(), p_text);
    WriteFileAtomically((dir / "q.json").string(), q_text);
    WriteFileAtomically((dir / "meta.json").string(), meta.dump(2) + "\n");
    out << "wrote " << (dir / "p.json").string() << ' ' << (dir / "q.json").string() << ' '
        << (dir / "meta.json").string() << '\n';
    return kExitAccept;
  } catch (const std::exception& e) {
    err << "aktest gen-hard: " << e.what() << '\n';
    return kExitUsage;
  }
}

int RunExperimentCommand(const ExperimentCommand& cmd, std::ostream& out, std::ostream& err) {
  ExperimentResult result;
  try {
    ExperimentConfig cfg = LoadExperimentConfig(cmd.config_file);
    if (cmd.trials) cfg.trials = *cmd.trials;
    if (cmd.jobs) cfg.jobs = *cmd.jobs;
    if (cmd.seed) cfg.seed = *cmd.seed;
    if (cmd.constants_file) ApplyConstantsFile(*cmd.constants_file, cfg.base);
    if (cmd.mode) cfg.base.mode = ParseTesterMode(*cmd.mode);
    cfg.Validate();
    if (cmd.out) {
      // Fail before any trial runs when the destination is not writable.
      std::ofstream probe(*cmd.out + ".tmp", std::ios::binary | std::ios::trunc);
      if (!probe) throw UsageError("cannot write results to '" + *cmd.out + "'");
    }
    result = RunExperiment(cfg);
    const std::string csv = FormatCsv(result.rows);
    if (cmd.out) {
      WriteFileAtomically(*cmd.out, csv);
      WriteFileAtomically(*cmd.out + ".config.json", ExperimentConfigToJson(cfg).dump(2) + "\n");
      for (const auto& cell : result.cells) out << FormatSummaryLine(cell) << '\n';
    } else {
      out << csv;
      for (const auto& cell : result.cells) err << FormatSummaryLine(cell) << '\n';
    }
    for (const auto& row : result.rows) {
      if (row.verdict == "error") {
        err << "trial " << row.trial << " (" << row.family << ", k=" << row.k << "): " << row.error << '\n';
      }
    }
    return kExitAccept;
  } catch (const std::exception& e) {
    err << "aktest experiment: " << e.what() << '\n';
    return kExitUsage;
  }
}

int RunVerifyCommand(const VerifyCommand& cmd, std::ostream& out, std::ostream& err) {
  std::vector<std::string> suites;
  if (cmd.suite == "all") {
    suites = VerifySuiteNames();
  } else {
    bool known = false;
    for (const auto& name : VerifySuiteNames()) known = known || name == cmd.suite;
    if (!known) {
      err << "aktest verify: unknown suite '" << cmd.suite << "' (known:";
      for (const auto& name : VerifySuiteNames()) err << ' ' << name;
      err << ", all)\n";
      return kExitUsage;
    }
    suites.push_back(cmd.suite);
  }
  bool all_passed = true;
  try {
    for (const auto& suite : suites) {
      for (const VerifyCheck& check : RunVerifySuite(suite, cmd.seed)) {
        all_passed = all_passed && check.passed;
        out << (check.passed ? "PASS " : "FAIL ") << check.suite << ": " << check.property << " ["
            << check.detail << "]\n";
      }
    }
  } catch (const std::exception& e) {
    err << "aktest verify: " << e.what() << '\n';
    return kExitUsage;
  }
  return all_passed ? kExitAccept : kExitReject;
}

}  // namespace aktest::cli
