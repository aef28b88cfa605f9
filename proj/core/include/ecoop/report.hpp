#pragma once

#include <string>
#include <vector>

#include "ecoop/types.hpp"

namespace ecoop {

// Multipliers recovered from a candidate optimum plus the residual norms of
// the optimality system they leave unexplained. All residuals are >= 0; at a
// true optimum every residual is small.
struct KktReport {
  double stationarity_residual = 0.0;
  double complementary_slackness_residual = 0.0;
  double dual_feasibility_residual = 0.0;
  std::vector<double> lambda;  // user-1 / source energy-causality multipliers
  std::vector<double> mu;      // user-2 / relay energy-causality multipliers
  std::vector<double> eta;     // transfer-budget multipliers
  std::vector<double> rho;     // data-causality multipliers (relay model)
  std::vector<double> gamma;   // reserved for sum-rate multipliers (MAC)

  bool within(double tol) const {
    return stationarity_residual <= tol &&
           complementary_slackness_residual <= tol &&
           dual_feasibility_residual <= tol;
  }
};

// One named structural check. slack measures how far the condition is from
// holding exactly (absolute deviation for equalities, signed excess for
// inequalities); pass means the slack is within the lemma tolerance.
struct LemmaResult {
  std::string name;
  bool pass = false;
  double slack = 0.0;
};

// Generic solve outcome shared by the two-way path and diagnostics.
struct SolveReport {
  PowerSchedule p1;
  PowerSchedule p2;
  TransferSchedule delta;
  double rate1 = 0.0;      // bits over the horizon for user 1
  double rate2 = 0.0;      // bits over the horizon for user 2
  double objective = 0.0;  // scalarized objective the solver maximized
  KktReport kkt;
  std::vector<LemmaResult> checks;
  std::string method;  // which solve path produced this report
};

}  // namespace ecoop
