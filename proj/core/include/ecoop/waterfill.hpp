#pragma once

#include <cstddef>
#include <vector>

#include "ecoop/types.hpp"

namespace ecoop {

// Piecewise-constant structure of a directional water-filling solution.
// breakpoints = n_0=0 < n_1 < ... < n_m = T; segment j covers slots
// (n_{j-1}, n_j] and runs flat at levels[j].
struct Segmentation {
  std::vector<std::size_t> breakpoints;  // includes leading 0 and trailing T
  std::vector<double> levels;            // one per segment, strictly increasing

  std::vector<double> to_powers() const;
};

// Minimal forward-average scan over a nondecreasing cumulative cap curve.
// Each segment ends where the capped average from the previous breakpoint is
// smallest; ties break toward the largest index so later segments are
// strictly higher. O(T^2).
Segmentation min_average_segmentation(const std::vector<double>& caps);

// Energy flows only from past to future: the unique maximizer of
// sum rate(p_i) subject to prefix sums <= caps and full exhaustion of
// caps.back(). Output is nondecreasing and changes level only at slots
// whose cap is tight.
PowerSchedule single_user_dwf(const std::vector<double>& caps);

// Euclidean projection of v onto { p >= 0, prefix sums <= caps }.
// Exact active-set solve; the projection's own KKT conditions hold to 1e-9.
PowerSchedule project_cumulative(const std::vector<double>& v,
                                 const std::vector<double>& caps);

}  // namespace ecoop
