#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "ecoop/region.hpp"
#include "ecoop/report.hpp"
#include "ecoop/types.hpp"

namespace ecoop {

// One-way valve between adjacent cells. meter follows the per-slot discharge
// reading convention (what each slot gave up in an event); credit tracks the
// net volume that has passed and may lawfully flow back.
struct Tap {
  bool open = false;
  double meter = 0.0;
  double credit = 0.0;
};

// 2 x T grid of water cells. Row 0 is user 1 (volume = power), row 1 is
// user 2 (volume = power / alpha, so down-tap flow conserves volume).
// Cell area theta_u and base 1/theta1 resp. 1/(alpha*theta2) make the water
// level (1+p1)/theta1 resp. (1+p2)/(alpha*theta2); equal levels across a
// flowing tap encode the optimality ratio.
struct WaterSystem {
  std::array<std::vector<double>, 2> volume;
  std::array<double, 2> area{1.0, 1.0};
  std::array<double, 2> base{1.0, 1.0};
  double alpha = 1.0;
  std::array<std::vector<Tap>, 2> right_taps;  // T-1 per user
  std::vector<Tap> down_taps;                  // T, user 1 -> user 2

  std::size_t slots() const { return volume[0].size(); }
  double level(int user, std::size_t slot) const {
    return base[static_cast<std::size_t>(user)] +
           volume[static_cast<std::size_t>(user)][slot] /
               area[static_cast<std::size_t>(user)];
  }
  double total_volume() const;
};

// Event orderings. DownBackwardWithMeters is the optimal schedule; the other
// two reproduce known sub-optimal outcomes for diagnostics. HorizontalOnly
// stops after per-user equalization (the transient state).
enum class TapOrdering {
  DownBackwardWithMeters,
  HorizontalOnly,
  HorizontalFirstNoMeters,
  VerticalFirst,
};

struct TwoDimResult {
  WaterSystem system;
  PowerSchedule p1;
  PowerSchedule p2;
  TransferSchedule delta;
  bool converged = false;
  int sweeps = 0;
};

// Two-dimensional directional water-filling: fill, equalize each user's row
// forward in time, then open down taps backward with metered reflow until
// no event moves any level by more than the tap tolerance. Requires
// theta1, theta2 > 0.
TwoDimResult two_dim_dwf(const EnergyProfile& e1, const EnergyProfile& e2,
                         double alpha, double theta1, double theta2,
                         TapOrdering ordering = TapOrdering::DownBackwardWithMeters);

// Weighted-rate solve covering the degenerate weights: theta2 = 0 runs both
// users' own water-filling with no transfer; theta1 = 0 sends every drop of
// user 1's energy down; otherwise the water system decides.
SolveReport solve_twoway_weighted(const Scenario& s,
                                  std::pair<double, double> theta);

// Sweeps n_points weight directions from (1,0) to (0,1) and returns the
// boundary sorted by decreasing R1.
std::vector<RegionPoint> trace_twoway_region(const Scenario& s,
                                             std::size_t n_points);

struct RatioCheck {
  bool applicable = true;  // false when theta2 = 0 or alpha = 0
  bool pass = true;
  // One entry per slot with active transfer: deviation of (1+p1)/(1+p2)
  // from theta1/(alpha*theta2), one-sided when the slot's power sits at 0.
  std::vector<LemmaResult> per_slot;
};

RatioCheck verify_transfer_ratio(const SolveReport& report,
                                 std::pair<double, double> theta, double alpha);

}  // namespace ecoop
