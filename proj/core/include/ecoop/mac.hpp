#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ecoop/region.hpp"
#include "ecoop/report.hpp"
#include "ecoop/types.hpp"

namespace ecoop {

enum class MacRegime { NoTransfer, General, FullTransfer };

struct MacReport {
  PowerSchedule p1;
  PowerSchedule p2;
  TransferSchedule delta;
  std::pair<double, double> corner_rates{0.0, 0.0};
  double sum_rate = 0.0;  // bits over the horizon at the selected corner
  double objective = 0.0; // theta1*R1 + theta2*R2 at the selected corner
  MacRegime regime = MacRegime::NoTransfer;
  KktReport kkt;
};

// Decoding-order corners of the per-schedule rate pentagon:
// (R1max, Rsum - R1max) and (Rsum - R2max, R2max).
std::pair<std::pair<double, double>, std::pair<double, double>>
pentagon_corners(const PowerSchedule& p1, const PowerSchedule& p2);

// Weight ratio theta2/theta1 at and beyond which the optimal policy moves
// every unit of user 1's energy to user 2. Rejects alpha = 0.
double full_transfer_threshold(double alpha);

// theta1 >= theta2: no transfer (equal weights hit the sum-rate fast path
// splitting the water-filled sum of profiles); ratio >= 1/alpha: full
// transfer with user 1 silent; in between: certified numerical solve.
MacReport solve_mac_weighted(const Scenario& s,
                             std::pair<double, double> theta);

// Sweeps weights; emits both pentagon corners wherever theta1 >= theta2,
// keeps dominant points only, sorted by decreasing R1.
std::vector<RegionPoint> trace_mac_region(const Scenario& s,
                                          std::size_t n_points);

}  // namespace ecoop
