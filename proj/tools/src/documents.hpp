#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ecoop/region.hpp"
#include "scenario_io.hpp"

namespace ecoop::io {

struct SolveDocument {
  nlohmann::json body;
  bool verified = false;
};

// Solve the scenario with the model's production solver and package
// schedules, rates, KKT residuals, and structural checks.
SolveDocument solve_document(const ScenarioInput& in);

// Re-ingest a result document: rebuild the scenario and schedules, recompute
// every outcome derivable from them (KKT residuals, lemma and ratio checks),
// and report mismatches against the stored values. Empty result means the
// document reproduces.
std::vector<std::string> recheck_document(const nlohmann::json& doc);

// Region tracing for two-way/MAC; throws for relay.
std::vector<RegionPoint> trace_for(const ScenarioInput& in);

// CSV with header theta1,theta2,R1,R2,regime, '.' decimals, '\n' endings.
std::string region_csv(const std::vector<RegionPoint>& pts);

// Self-contained plot of the traced boundary and the no-transfer baseline.
std::string region_svg(const std::vector<RegionPoint>& region,
                       const std::vector<RegionPoint>& baseline,
                       const std::string& title);

}  // namespace ecoop::io
