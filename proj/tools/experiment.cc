#include "experiment.h"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "constants.h"
#include "families.h"

namespace aktest::cli {

namespace {

std::string ShortestDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T>
std::vector<T> ListField(const nlohmann::json& doc, const std::string& key) {
  const auto& value = doc.at(key);
  std::vector<T> out;
  try {
    if (value.is_array()) {
      for (const auto& item : value) out.push_back(item.get<T>());
    } else {
      out.push_back(value.get<T>());
    }
  } catch (const nlohmann::json::exception&) {
    throw UsageError("experiment config: '" + key + "' has the wrong type");
  }
  return out;
}

std::string CellFamily(const std::string& family, double multiplier) {
  return multiplier == 1.0 ? family : family + "@x" + ShortestDouble(multiplier);
}

ResultRow RunTrial(const ExperimentConfig& cfg, const std::string& family, int k, double eps,
                   double multiplier, std::int64_t trial) {
  ResultRow row;
  row.trial = trial;
  row.seed = DeriveSeed(cfg.seed, static_cast<std::uint64_t>(trial));
  row.family = CellFamily(family, multiplier);
  row.k = k;
  row.eps = eps;
  const auto start = std::chrono::steady_clock::now();
  try {
    const InstancePair inst = MakeFamily(family, k, Mix64(row.seed));
    row.d = static_cast<int>(inst.p.dim());
    TesterConfig tc = cfg.base;
    tc.k = k;
    tc.d = row.d;
    tc.eps = eps;
    tc.budget_multiplier = multiplier;
    const GridSampler p(inst.p);
    const GridSampler q(inst.q);
    Rng rng(row.seed);
    const TestVerdict v = cfg.test == ExperimentTest::kTv ? TvHistogramTest(p, q, tc, rng)
                                                          : AkClosenessTest(p, q, tc, rng);
    row.samples_used = v.samples_used;
    row.verdict = std::string(ToString(v.decision));
    row.statistic = v.statistic;
    row.threshold = v.threshold;
  } catch (const std::exception& e) {
    row.verdict = "error";
    row.samples_used = 0;
    row.statistic.reset();
    row.threshold.reset();
    row.error = e.what();
  }
  if (cfg.timing) {
    row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  }
  return row;
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (families.empty()) throw UsageError("experiment config: no families");
  for (const auto& f : families) {
    bool known = false;
    for (const auto& name : FamilyNames()) known = known || name == f;
    if (!known) throw UsageError("experiment config: unknown family '" + f + "'");
  }
  if (ks.empty() || eps.empty() || budget_multipliers.empty()) {
    throw UsageError("experiment config: k, eps and budget_multiplier need at least one value");
  }
  for (int k : ks) {
    if (k < 2) throw UsageError("experiment config: k must be >= 2");
  }
  for (double e : eps) {
    if (!(e > 0.0 && e <= 2.0)) throw UsageError("experiment config: eps must lie in (0, 2]");
  }
  for (double b : budget_multipliers) {
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw UsageError("experiment config: budget multipliers must be positive");
    }
  }
  if (trials < 1) throw UsageError("experiment config: trials must be >= 1");
  if (jobs < 1) throw UsageError("experiment config: jobs must be >= 1");
}

ExperimentConfig ParseExperimentConfig(const nlohmann::json& doc) {
  if (!doc.is_object()) throw UsageError("experiment config: expected a JSON object");
  static const char* const kKnown[] = {"test", "families", "family", "k", "eps",
                                       "budget_multiplier", "trials", "seed", "jobs",
                                       "timing", "mode", "constants"};
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* name : kKnown) known = known || key == name;
    if (!known) throw UsageError("experiment config: unknown key '" + key + "'");
  }
  ExperimentConfig cfg;
  cfg.base = PracticalDefaults(2, 1, 1.0);
  try {
    if (doc.contains("test")) {
      const std::string test = doc.at("test").get<std::string>();
      if (test == "ak") {
        cfg.test = ExperimentTest::kAk;
      } else if (test == "tv") {
        cfg.test = ExperimentTest::kTv;
      } else {
        throw UsageError("experiment config: test must be 'ak' or 'tv'");
      }
    }
    if (doc.contains("families")) {
      cfg.families = ListField<std::string>(doc, "families");
    } else if (doc.contains("family")) {
      cfg.families = ListField<std::string>(doc, "family");
    }
    if (doc.contains("k")) cfg.ks = ListField<int>(doc, "k");
    if (doc.contains("eps")) cfg.eps = ListField<double>(doc, "eps");
    if (doc.contains("budget_multiplier")) {
      cfg.budget_multipliers = ListField<double>(doc, "budget_multiplier");
    }
    if (!doc.contains("trials")) throw UsageError("experiment config: 'trials' is required");
    if (!doc.contains("seed")) throw UsageError("experiment config: 'seed' is required");
    cfg.trials = doc.at("trials").get<std::int64_t>();
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("jobs")) cfg.jobs = doc.at("jobs").get<int>();
    if (doc.contains("timing")) cfg.timing = doc.at("timing").get<bool>();
    if (doc.contains("mode")) cfg.base.mode = ParseTesterMode(doc.at("mode").get<std::string>());
    if (doc.contains("constants")) ApplyConstants(doc.at("constants"), cfg.base);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("experiment config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read experiment config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseExperimentConfig(nlohmann::json::parse(buffer.str()));
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("experiment config '" + path + "': " + e.what());
  }
}

nlohmann::json ExperimentConfigToJson(const ExperimentConfig& cfg) {
  nlohmann::json doc;
  doc["schema"] = kResultsSchema;
  doc["test"] = cfg.test == ExperimentTest::kTv ? "tv" : "ak";
  doc["families"] = cfg.families;
  doc["k"] = cfg.ks;
  doc["eps"] = cfg.eps;
  doc["budget_multiplier"] = cfg.budget_multipliers;
  doc["trials"] = cfg.trials;
  doc["seed"] = cfg.seed;
  doc["timing"] = cfg.timing;
  doc["seed_scheme"] = "trial t uses DeriveSeed(seed, t) = Mix64(seed ^ Mix64(t + 1))";
  nlohmann::json constants = ConstantsToJson(cfg.base);
  constants.erase("budget_multiplier");
  doc["constants"] = constants;
  return doc;
}

std::pair<double, double> WilsonInterval(std::int64_t successes, std::int64_t n) {
  if (n <= 0) return {0.0, 1.0};
  const double z = 1.96;
  const double nn = static_cast<double>(n);
  const double phat = successes / nn;
  const double denom = 1.0 + z * z / nn;
  const double center = (phat + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z * z / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  struct Cell {
    std::string family;
    int k;
    double eps;
    double multiplier;
  };
  std::vector<Cell> cells;
  for (const auto& family : cfg.families) {
    for (int k : cfg.ks) {
      for (double eps : cfg.eps) {
        for (double mult : cfg.budget_multipliers) cells.push_back({family, k, eps, mult});
      }
    }
  }
  const std::size_t total = cells.size() * static_cast<std::size_t>(cfg.trials);
  ExperimentResult result;
  result.rows.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      const Cell& c = cells[i / cfg.trials];
      result.rows[i] = RunTrial(cfg, c.family, c.k, c.eps, c.multiplier,
                                static_cast<std::int64_t>(i % cfg.trials));
    }
  };
  const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(total)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellSummary s;
    s.family = cells[c].family;
    s.k = cells[c].k;
    s.eps = cells[c].eps;
    s.budget_multiplier = cells[c].multiplier;
    s.trials = cfg.trials;
    double samples = 0.0;
    for (std::int64_t t = 0; t < cfg.trials; ++t) {
      const ResultRow& row = result.rows[c * cfg.trials + t];
      if (row.verdict == "error") {
        ++s.errors;
        continue;
      }
      if (row.verdict == "accept") ++s.accepts;
      samples += static_cast<double>(row.samples_used);
    }
    const std::int64_t valid = s.trials - s.errors;
    s.accept_rate = valid > 0 ? static_cast<double>(s.accepts) / valid : 0.0;
    std::tie(s.ci_low, s.ci_high) = WilsonInterval(s.accepts, valid);
    s.mean_samples = valid > 0 ? samples / valid : 0.0;
    result.cells.push_back(s);
  }
  return result;
}

std::string FormatCsv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << kResultsHeader << '\n';
  for (const ResultRow& r : rows) {
    out << kResultsSchema << ',' << r.trial << ',' << r.seed << ',' << r.family << ',' << r.k
        << ',' << r.d << ',' << ShortestDouble(r.eps) << ',' << r.samples_used << ','
        << r.verdict << ',' << (r.statistic ? ShortestDouble(*r.statistic) : "") << ','
        << (r.threshold ? ShortestDouble(*r.threshold) : "") << ',' << r.wall_ms << '\n';
  }
  return out.str();
}

std::string FormatSummaryLine(const CellSummary& c) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "summary family=%s k=%d eps=%s budget_multiplier=%s trials=%lld errors=%lld "
                "accept_rate=%.4f ci95=[%.4f,%.4f] mean_samples=%.1f",
                c.family.c_str(), c.k, ShortestDouble(c.eps).c_str(),
                ShortestDouble(c.budget_multiplier).c_str(), static_cast<long long>(c.trials),
                static_cast<long long>(c.errors), c.accept_rate, c.ci_low, c.ci_high,
                c.mean_samples);
  return buf;
}

}  // namespace aktest::cli
