#include "ecoop/region.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ecoop {

std::vector<std::pair<double, double>> weight_sweep(std::size_t n_points) {
  if (n_points < 2) {
    throw std::invalid_argument("a sweep needs at least both endpoints");
  }
  std::vector<std::pair<double, double>> w;
  w.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n_points - 1);
    w.emplace_back(1.0 - u, u);
  }
  w.front() = {1.0, 0.0};
  w.back() = {0.0, 1.0};
  return w;
}

void sort_boundary(std::vector<RegionPoint>& points) {
  std::stable_sort(points.begin(), points.end(),
                   [](const RegionPoint& a, const RegionPoint& b) {
                     if (a.rate1 != b.rate1) return a.rate1 > b.rate1;
                     return a.rate2 < b.rate2;
                   });
}

double concavity_slack(const std::vector<RegionPoint>& points) {
  std::vector<RegionPoint> sorted = points;
  sort_boundary(sorted);
  double worst = 0.0;
  for (std::size_t i = 0; i + 2 < sorted.size(); ++i) {
    const RegionPoint& a = sorted[i];
    const RegionPoint& m = sorted[i + 1];
    const RegionPoint& b = sorted[i + 2];
    const double span = a.rate1 - b.rate1;
    if (span <= 1e-15) continue;
    const double w = (a.rate1 - m.rate1) / span;
    const double chord = (1.0 - w) * a.rate2 + w * b.rate2;
    worst = std::min(worst, m.rate2 - chord);
  }
  return worst;
}

bool boundary_dominates(const std::vector<RegionPoint>& boundary, double r1,
                        double r2, double tol) {
  std::vector<RegionPoint> sorted = boundary;
  sort_boundary(sorted);
  for (const RegionPoint& p : sorted) {
    if (p.rate1 >= r1 - tol && p.rate2 >= r2 - tol) return true;
  }
  // Between traced points the boundary is at least the chord.
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const RegionPoint& a = sorted[i];
    const RegionPoint& b = sorted[i + 1];
    if (!(a.rate1 >= r1 - tol && r1 - tol >= b.rate1)) continue;
    const double span = a.rate1 - b.rate1;
    if (span <= 1e-15) continue;
    const double w = (a.rate1 - r1) / span;
    const double chord = (1.0 - w) * a.rate2 + w * b.rate2;
    if (chord >= r2 - tol) return true;
  }
  return false;
}

}  // namespace ecoop
