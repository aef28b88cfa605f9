#pragma once

#include <functional>
#include <vector>

#include "ecoop/report.hpp"
#include "ecoop/types.hpp"

namespace ecoop {

// The feasible set over stacked variables x = (p1, p2, delta), each of
// length T, x >= 0: for every prefix k,
//   sum p1 + sum delta        <= cumulative e1,
//   sum p2 - alpha*sum delta  <= cumulative e2,
//   sum delta                 <= cumulative e1   (optional explicit row).
struct CausalityPolytope {
  EnergyProfile e1;
  EnergyProfile e2;
  double alpha = 1.0;
  bool include_transfer_budget = true;

  std::size_t slots() const { return e1.slots(); }
};

// Smooth concave objective of the stacked variable vector. hessian may be
// empty; when present it enables the active-set polish that drives the
// first-order stationarity error to ~1e-9.
struct ConcaveObjective {
  std::function<double(const std::vector<double>&)> value;
  std::function<std::vector<double>(const std::vector<double>&)> gradient;
  // Dense (3T)x(3T) Hessian, row-major rows of length 3T.
  std::function<std::vector<std::vector<double>>(const std::vector<double>&)>
      hessian;
};

struct SolverResult {
  PowerSchedule p1;
  PowerSchedule p2;
  TransferSchedule delta;
  double objective = 0.0;
  bool converged = false;
  long iterations = 0;
};

// Projected gradient ascent with Armijo backtracking over the causality
// polytope, followed by an active-set Newton polish when a Hessian is
// supplied. Ascent is monotone: the objective never decreases across
// accepted iterations. tol bounds the final projected-gradient norm.
SolverResult maximize_concave_over_causality(const ConcaveObjective& objective,
                                             const CausalityPolytope& polytope,
                                             double tol);

}  // namespace ecoop
