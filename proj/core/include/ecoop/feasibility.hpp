#pragma once

#include <vector>

#include "ecoop/types.hpp"

namespace ecoop {

// Energy-causality check over cumulative sums: for every prefix k,
//   sum p1 <= sum (e1 - delta),  sum p2 <= sum (e2 + alpha*delta),
//   sum delta <= sum e1,
// plus nonnegativity of all entries. Comparisons allow tol::feasibility
// absolute slack. Empty result means feasible.
std::vector<Violation> feasibility_violations(const Scenario& s,
                                              const PowerSchedule& p1,
                                              const PowerSchedule& p2,
                                              const TransferSchedule& d);

// Relay-only: the relay may not have forwarded more bits than it received,
// at any prefix. Rates are evaluated at the given schedules.
std::vector<Violation> data_causality_violations(const PowerSchedule& p1,
                                                 const PowerSchedule& p2);

}  // namespace ecoop
