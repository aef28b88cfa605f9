#pragma once

// Numeric tolerances used across the library. Tests pin these values;
// loosening one here loosens every check built on it.
namespace ecoop::tol {

// Absolute slack allowed on cumulative-sum feasibility comparisons.
inline constexpr double feasibility = 1e-9;

// KKT residual ceiling certifying a solution as optimal.
inline constexpr double kkt = 1e-6;

// Slack allowed when checking structural lemmas (totals equal, exhaustion).
inline constexpr double lemma = 1e-6;

// Max-norm threshold below which two schedules count as equal.
inline constexpr double schedule_equal = 1e-7;

// Water-system relaxation: per-event level change considered converged.
inline constexpr double tap_level = 1e-10;

// Hard cap on relaxation sweeps of the two-dimensional water system.
inline constexpr int tap_sweeps = 10000;

// Water volume bookkeeping must balance to this.
inline constexpr double water_conservation = 1e-12;

// A traced region boundary may deviate from concavity by at most this.
inline constexpr double region_concavity = -1e-7;

// Treat a transfer amount below this as zero when checking ratio conditions.
inline constexpr double transfer_active = 1e-9;

}  // namespace ecoop::tol
