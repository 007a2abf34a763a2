#include "aktest/spec_io.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace aktest {

namespace {

using nlohmann::json;

double ParseReal(const json& value, const char* what) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string& s = value.get_ref<const std::string&>();
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw UsageError(std::string("distribution spec: bad decimal for ") + what + ": '" + s + "'");
    }
    return out;
  }
  throw UsageError(std::string("distribution spec: expected a number for ") + what);
}

}  // namespace

DiscreteGridDistribution ParseDistributionSpec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("distribution spec: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("distribution spec: top level must be an object");
  for (const char* key : {"dim", "axes", "mass"}) {
    if (!doc.contains(key)) throw UsageError(std::string("distribution spec: missing field '") + key + "'");
  }
  try {
    const auto dim = doc.at("dim").get<std::int64_t>();
    if (dim < 1) throw UsageError("distribution spec: dim must be >= 1");
    const json& axes_json = doc.at("axes");
    if (!axes_json.is_array() || static_cast<std::int64_t>(axes_json.size()) != dim) {
      throw UsageError("distribution spec: 'axes' must list one coordinate array per dimension");
    }
    std::vector<std::vector<double>> axes;
    for (const json& axis : axes_json) {
      if (!axis.is_array()) throw UsageError("distribution spec: axis must be an array");
      std::vector<double> coords;
      for (const json& c : axis) coords.push_back(ParseReal(c, "coordinate"));
      axes.push_back(std::move(coords));
    }
    std::map<GridIndex, double> mass;
    for (const json& entry : doc.at("mass")) {
      GridIndex index;
      for (const json& i : entry.at("idx")) {
        const auto v = i.get<std::int64_t>();
        if (v < 0) throw UsageError("distribution spec: negative index");
        index.push_back(static_cast<std::uint32_t>(v));
      }
      const double w = ParseReal(entry.at("w"), "mass");
      if (mass.count(index)) throw UsageError("distribution spec: duplicate index tuple");
      mass.emplace(std::move(index), w);
    }
    DiscreteGridDistribution dist(std::move(axes), std::move(mass));
    if (doc.value("normalized", false) && !dist.IsNormalized()) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "distribution spec: declared normalized but total mass is " << dist.TotalMass();
      throw UsageError(msg.str());
    }
    return dist;
  } catch (const json::exception& e) {
    throw UsageError(std::string("distribution spec: ") + e.what());
  }
}

DiscreteGridDistribution LoadDistributionSpec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open distribution spec '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseDistributionSpec(buf.str());
}

std::string SerializeDistributionSpec(const DiscreteGridDistribution& dist) {
  json doc;
  doc["dim"] = dist.dim();
  doc["axes"] = dist.axes();
  json mass = json::array();
  for (const auto& [index, w] : dist.mass()) mass.push_back({{"idx", index}, {"w", w}});
  doc["mass"] = std::move(mass);
  doc["normalized"] = dist.IsNormalized();
  return doc.dump() + "\n";
}

}  // namespace aktest
