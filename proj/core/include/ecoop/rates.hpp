#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace ecoop {

inline constexpr double kLn2 = 0.6931471805599453094;

// AWGN rate in bits per slot at SNR p: (1/2) log2(1 + p).
inline double rate_of_power(double p) { return 0.5 * std::log1p(p) / kLn2; }

// Inverse map: SNR needed to sustain r bits per slot.
inline double power_of_rate(double r) { return std::expm1(2.0 * r * kLn2); }

// d rate / d power at SNR p.
inline double rate_slope(double p) { return 0.5 / (kLn2 * (1.0 + p)); }

inline std::vector<double> rates_of_powers(const std::vector<double>& p) {
  std::vector<double> r(p.size());
  std::transform(p.begin(), p.end(), r.begin(),
                 [](double x) { return rate_of_power(x); });
  return r;
}

inline double total_rate(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p) s += rate_of_power(x);
  return s;
}

// True when a is majorized by b: equal totals and, after sorting both
// descending, every partial sum of b dominates that of a. Throws when the
// totals disagree beyond 1e-9. Used on rate vectors (Lemma-style checks).
bool majorizes(std::vector<double> a, std::vector<double> b);

}  // namespace ecoop
