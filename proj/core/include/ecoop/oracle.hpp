#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ecoop/types.hpp"

namespace ecoop {

struct OracleResult {
  double best_objective = 0.0;
  std::vector<double> p1;
  std::vector<double> p2;
  std::vector<double> delta;
  int grid_levels = 0;
  long long cells_evaluated = 0;
};

// Independent brute-force baseline: nested grid refinement (9 points per
// gridded variable, box shrink 1/3 around the incumbent per depth round)
// with feasibility filtering; inner one-user subproblems are solved exactly
// by enumeration, never by the library's solvers. Ties break to the lowest
// lexicographic point. T <= 4 only.
OracleResult brute_force_solve(const Scenario& s,
                               std::pair<double, double> theta, int depth);

// Deterministic scenario generator: entries uniform on [0, max_energy],
// alpha uniform on [0.1, 1]. Rejects max_energy <= 0.
Scenario random_scenario(unsigned seed, std::size_t t, double max_energy,
                         Model model);

struct CompareVerdict {
  bool pass = false;
  double relative_gap = 0.0;  // (oracle - solver) / max(|oracle|, 1e-12)
};

// The solver may legitimately beat the oracle's grid; it fails only by
// falling more than rel_tol below it.
CompareVerdict compare_reports(double solver_obj, double oracle_obj,
                               double rel_tol);

struct BatchOutcome {
  int instances = 0;
  int passes = 0;
  int failures = 0;
  double worst_gap = 0.0;
  std::vector<std::string> failure_notes;
};

// Runs `count` seeded random instances of one model at T in {2,3} through
// solver-vs-oracle comparison plus the structural checks; deterministic per
// seed.
BatchOutcome verify_batch(unsigned seed, int count, Model model, int depth,
                          double rel_tol);

}  // namespace ecoop
