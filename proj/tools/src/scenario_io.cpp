#include "scenario_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

namespace ecoop::io {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw std::invalid_argument("unknown field '" + it.key() + "' in " +
                                  where);
    }
  }
}

std::vector<double> real_array(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("field '" + name +
                                "' must be a nonempty array of reals");
  }
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) {
      throw std::invalid_argument("field '" + name +
                                  "' must contain only reals");
    }
    v.push_back(x.get<double>());
  }
  return v;
}

double real_field(const json& j, const std::string& name) {
  if (!j.is_number()) {
    throw std::invalid_argument("field '" + name + "' must be a real");
  }
  return j.get<double>();
}

Model parse_model(const json& j) {
  if (!j.is_string()) {
    throw std::invalid_argument("field 'model' must be a string");
  }
  const std::string m = j.get<std::string>();
  if (m == "relay") return Model::Relay;
  if (m == "twoway") return Model::TwoWay;
  if (m == "mac") return Model::Mac;
  throw std::invalid_argument("field 'model' must be relay, twoway, or mac");
}

PhysicalUnits parse_units(const json& j) {
  reject_unknown(
      j, {"bandwidth_hz", "n0_w_per_hz", "path_loss_db", "slot_seconds"},
      "units");
  PhysicalUnits u;
  if (j.contains("bandwidth_hz")) {
    u.bandwidth_hz = real_field(j.at("bandwidth_hz"), "units.bandwidth_hz");
  }
  if (j.contains("n0_w_per_hz")) {
    u.n0_w_per_hz = real_field(j.at("n0_w_per_hz"), "units.n0_w_per_hz");
  }
  if (j.contains("path_loss_db")) {
    u.path_loss_db = real_field(j.at("path_loss_db"), "units.path_loss_db");
  }
  if (j.contains("slot_seconds")) {
    u.slot_seconds = real_field(j.at("slot_seconds"), "units.slot_seconds");
  }
  return u;
}

}  // namespace

ScenarioInput parse_scenario(const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("scenario file must be a JSON object");
  }
  reject_unknown(
      j, {"model", "T", "e1", "e2", "alpha", "theta", "sweep_points", "units"},
      "scenario");
  for (const char* req : {"model", "T", "e1", "e2", "alpha"}) {
    if (!j.contains(req)) {
      throw std::invalid_argument(std::string("missing field '") + req + "'");
    }
  }
  ScenarioInput in;
  in.scenario.model = parse_model(j.at("model"));
  if (!j.at("T").is_number_integer()) {
    throw std::invalid_argument("field 'T' must be an integer");
  }
  const long long t = j.at("T").get<long long>();
  in.scenario.e1 = EnergyProfile(real_array(j.at("e1"), "e1"));
  in.scenario.e2 = EnergyProfile(real_array(j.at("e2"), "e2"));
  if (t < 1 || in.scenario.e1.amounts.size() != static_cast<std::size_t>(t) ||
      in.scenario.e2.amounts.size() != static_cast<std::size_t>(t)) {
    throw std::invalid_argument("field 'T' must match the profile lengths");
  }
  in.scenario.alpha = real_field(j.at("alpha"), "alpha");
  if (j.contains("theta")) {
    const auto& th = j.at("theta");
    if (!th.is_array() || th.size() != 2 || !th[0].is_number() ||
        !th[1].is_number()) {
      throw std::invalid_argument("field 'theta' must be a pair of reals");
    }
    in.theta = {th[0].get<double>(), th[1].get<double>()};
  }
  if (j.contains("sweep_points")) {
    if (!j.at("sweep_points").is_number_integer()) {
      throw std::invalid_argument("field 'sweep_points' must be an integer");
    }
    in.sweep_points = j.at("sweep_points").get<int>();
  }
  if (j.contains("units")) {
    if (!j.at("units").is_object()) {
      throw std::invalid_argument("field 'units' must be an object");
    }
    in.scenario.units = parse_units(j.at("units"));
  }
  in.scenario.validate();
  return in;
}

ScenarioInput load_scenario_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in '" + path +
                                "': " + e.what());
  }
  return parse_scenario(j);
}

double round12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

json round12_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(round12(x));
  return a;
}

json scenario_to_json(const ScenarioInput& in) {
  json j;
  switch (in.scenario.model) {
    case Model::Relay: j["model"] = "relay"; break;
    case Model::TwoWay: j["model"] = "twoway"; break;
    case Model::Mac: j["model"] = "mac"; break;
  }
  j["T"] = in.scenario.e1.amounts.size();
  j["e1"] = round12_array(in.scenario.e1.amounts);
  j["e2"] = round12_array(in.scenario.e2.amounts);
  j["alpha"] = round12(in.scenario.alpha);
  if (in.theta) {
    j["theta"] = {round12(in.theta->first), round12(in.theta->second)};
  }
  if (in.sweep_points) j["sweep_points"] = *in.sweep_points;
  if (in.scenario.units) {
    const PhysicalUnits& u = *in.scenario.units;
    j["units"] = {{"bandwidth_hz", round12(u.bandwidth_hz)},
                  {"n0_w_per_hz", round12(u.n0_w_per_hz)},
                  {"path_loss_db", round12(u.path_loss_db)},
                  {"slot_seconds", round12(u.slot_seconds)}};
  }
  return j;
}

json demo_fixture(const std::string& name) {
  if (name == "relay") {
    return json{{"model", "relay"},
                {"T", 4},
                {"e1", {12.0, 0.0, 0.0, 0.0}},
                {"e2", {5.0, 1.0, 0.0, 2.0}},
                {"alpha", 0.5}};
  }
  if (name == "twoway") {
    return json{{"model", "twoway"},
                {"T", 3},
                {"e1", {0.0, 12.0, 0.0}},
                {"e2", {6.0, 6.0, 0.0}},
                {"alpha", 1.0},
                {"theta", {1.0, 1.0}}};
  }
  if (name == "twoway-region") {
    return json{{"model", "twoway"},
                {"T", 3},
                {"e1", {5.0, 10.0, 5.0}},
                {"e2", {10.0, 5.0, 10.0}},
                {"alpha", 0.7},
                {"sweep_points", 33}};
  }
  if (name == "mac-region") {
    return json{{"model", "mac"},
                {"T", 3},
                {"e1", {5.0, 2.0, 5.0}},
                {"e2", {1.0, 3.0, 1.0}},
                {"alpha", 0.5},
                {"sweep_points", 33}};
  }
  throw std::invalid_argument(
      "unknown demo '" + name +
      "' (available: relay, twoway, twoway-region, mac-region)");
}

std::vector<std::string> demo_names() {
  return {"relay", "twoway", "twoway-region", "mac-region"};
}

}  // namespace ecoop::io
