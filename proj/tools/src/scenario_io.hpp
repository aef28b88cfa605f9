#pragma once

#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "ecoop/types.hpp"

namespace ecoop::io {

// Parsed scenario file: the scenario plus the optional solve/region knobs
// that live beside it.
struct ScenarioInput {
  Scenario scenario;
  std::optional<std::pair<double, double>> theta;
  std::optional<int> sweep_points;
};

// Strict JSON ingestion: exact field names, unknown fields rejected, T must
// match the profile lengths. Throws std::invalid_argument with a field
// diagnostic on any mismatch.
ScenarioInput parse_scenario(const nlohmann::json& j);
ScenarioInput load_scenario_file(const std::string& path);

// Round every real through 12 significant digits so emitted documents are
// platform-stable.
double round12(double x);
nlohmann::json round12_array(const std::vector<double>& v);

nlohmann::json scenario_to_json(const ScenarioInput& in);

// Embedded demo fixtures; throws on unknown name.
nlohmann::json demo_fixture(const std::string& name);
std::vector<std::string> demo_names();

}  // namespace ecoop::io
