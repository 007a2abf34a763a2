#include "constants.h"

#include <fstream>
#include <sstream>

namespace aktest::cli {

namespace {

double NumberField(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number()) throw UsageError("constants: '" + key + "' must be a number");
  return value.get<double>();
}

}  // namespace

void ApplyConstants(const nlohmann::json& doc, TesterConfig& cfg) {
  if (!doc.is_object()) throw UsageError("constants: expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "mode") {
      if (!value.is_string()) throw UsageError("constants: 'mode' must be a string");
      cfg.mode = ParseTesterMode(value.get<std::string>());
    } else if (key == "budget_constant") {
      cfg.budget_constant = NumberField(value, key);
    } else if (key == "kappa_constant") {
      cfg.kappa_constant = NumberField(value, key);
    } else if (key == "alpha_constant") {
      cfg.alpha_constant = NumberField(value, key);
    } else if (key == "alpha_override") {
      if (value.is_null()) {
        cfg.alpha_override.reset();
      } else {
        cfg.alpha_override = NumberField(value, key);
      }
    } else if (key == "alpha_effective") {
      cfg.alpha_effective = NumberField(value, key);
    } else if (key == "consistency_constant") {
      cfg.consistency_constant = NumberField(value, key);
    } else if (key == "s_multiplier") {
      cfg.s_multiplier = NumberField(value, key);
    } else if (key == "budget_multiplier") {
      cfg.budget_multiplier = NumberField(value, key);
    } else if (key == "c_r") {
      cfg.flatten.robust.c_r = NumberField(value, key);
    } else if (key == "c_f") {
      cfg.flatten.c_f = NumberField(value, key);
    } else if (key == "repetitions") {
      if (!value.is_number_integer() || value.get<int>() < 1) {
        throw UsageError("constants: 'repetitions' must be a positive integer");
      }
      cfg.flatten.robust.repetitions = value.get<int>();
    } else {
      throw UsageError("constants: unknown key '" + key + "'");
    }
  }
}

void ApplyConstantsFile(const std::string& path, TesterConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read constants file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("constants file '" + path + "': " + e.what());
  }
  ApplyConstants(doc, cfg);
}

nlohmann::json ConstantsToJson(const TesterConfig& cfg) {
  nlohmann::json doc;
  doc["mode"] = std::string(ToString(cfg.mode));
  doc["budget_constant"] = cfg.budget_constant;
  doc["kappa_constant"] = cfg.kappa_constant;
  doc["alpha_constant"] = cfg.alpha_constant;
  doc["alpha_override"] = cfg.alpha_override ? nlohmann::json(*cfg.alpha_override) : nlohmann::json();
  doc["alpha_effective"] = cfg.alpha_effective;
  doc["consistency_constant"] = cfg.consistency_constant;
  doc["s_multiplier"] = cfg.s_multiplier;
  doc["budget_multiplier"] = cfg.budget_multiplier;
  doc["c_r"] = cfg.flatten.robust.c_r;
  doc["c_f"] = cfg.flatten.c_f;
  doc["repetitions"] = cfg.flatten.robust.repetitions;
  return doc;
}

}  // namespace aktest::cli
