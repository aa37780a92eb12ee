#include "jerkplan/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace jerkplan {

namespace {

using nlohmann::json;

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw std::invalid_argument(std::string("instance: missing field '") + key + "'");
  return *it;
}

double require_number(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_number()) throw std::invalid_argument(std::string("instance: field '") + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> require_array(const json& doc, const char* key, std::size_t n) {
  const json& v = require(doc, key);
  if (!v.is_array()) throw std::invalid_argument(std::string("instance: field '") + key + "' must be an array");
  if (v.size() != n)
    throw std::invalid_argument(std::string("instance: field '") + key + "' has " +
                                std::to_string(v.size()) + " entries, expected n = " + std::to_string(n));
  std::vector<double> out;
  out.reserve(n);
  for (const auto& x : v) {
    if (!x.is_number()) throw std::invalid_argument(std::string("instance: non-numeric entry in '") + key + "'");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

Instance instance_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("instance: JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("instance: top level must be an object");
  const json& version = require(doc, "version");
  if (!version.is_number_integer() || version.get<int>() != kInstanceSchemaVersion)
    throw std::invalid_argument("instance: unsupported schema version");

  const double length = require_number(doc, "s_f");
  const json& nfield = require(doc, "n");
  if (!nfield.is_number_integer() || nfield.get<long long>() < 2)
    throw std::invalid_argument("instance: 'n' must be an integer >= 2");
  const auto n = static_cast<std::size_t>(nfield.get<long long>());
  const double accel = require_number(doc, "A");
  const double jerk = require_number(doc, "J");

  if (doc.contains("u")) return Instance::from_bounds(length, require_array(doc, "u", n), accel, jerk);

  PathSpec path;
  path.length = length;
  path.curvature = require_array(doc, "curvature", n);
  if (doc.contains("curvature2")) path.curvature2 = require_array(doc, "curvature2", n);
  path.v_max = require_number(doc, "v_max");
  path.normal_accel = require_number(doc, "A_N");
  return Instance::from_bounds(length, build_upper_bound(path), accel, jerk);
}

Instance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("instance: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

std::string instance_to_json(const Instance& inst, const std::string& kind) {
  json doc;
  doc["version"] = kInstanceSchemaVersion;
  if (!kind.empty()) doc["kind"] = kind;
  doc["s_f"] = inst.length();
  doc["n"] = inst.n;
  doc["A"] = inst.accel;
  doc["J"] = inst.jerk;
  doc["u"] = inst.u;
  return doc.dump(2) + "\n";
}

void write_instance(const std::string& path, const Instance& inst, const std::string& kind) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("instance: cannot write '" + path + "'");
  out << instance_to_json(inst, kind);
}

}  // namespace jerkplan
