#pragma once

#include <utility>

#include "ecoop/report.hpp"
#include "ecoop/types.hpp"

namespace ecoop {

// Recovers multipliers for a candidate optimum of the scenario's weighted
// problem by nonnegative least squares on the stationarity equations, then
// reports the residual norms. theta is (theta1, theta2); it is ignored for
// the relay model, whose objective is the delivered throughput.
// Throws std::invalid_argument if the candidate is infeasible.
KktReport kkt_residuals(const Scenario& s, std::pair<double, double> theta,
                        const PowerSchedule& p1, const PowerSchedule& p2,
                        const TransferSchedule& delta);

}  // namespace ecoop
