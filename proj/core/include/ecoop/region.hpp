#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ecoop/types.hpp"

namespace ecoop {

// One traced boundary point: the weights, the rates they achieved, and the
// schedules achieving them.
struct RegionPoint {
  std::pair<double, double> theta{1.0, 0.0};
  double rate1 = 0.0;
  double rate2 = 0.0;
  PowerSchedule p1;
  PowerSchedule p2;
  TransferSchedule delta;
  std::string regime;  // solve-path annotation carried into region output
};

// Weight directions (1,0) -> (0,1), endpoints exact. n >= 2.
std::vector<std::pair<double, double>> weight_sweep(std::size_t n);

// Stable sort by decreasing rate1 (ties by increasing rate2).
void sort_boundary(std::vector<RegionPoint>& points);

// Most negative concavity slack over interior points of a boundary sorted by
// decreasing rate1: for each triple, how far the middle point sits below the
// chord of its neighbours (>= 0 means on or above). Degenerate chords with
// equal rate1 endpoints are skipped.
double concavity_slack(const std::vector<RegionPoint>& points);

// True when q is dominated by some point of the sorted boundary polyline
// (componentwise, within tol).
bool boundary_dominates(const std::vector<RegionPoint>& boundary, double r1,
                        double r2, double tol);

}  // namespace ecoop
