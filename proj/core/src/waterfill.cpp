#include "ecoop/waterfill.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "ecoop/qp.hpp"
#include "ecoop/tolerances.hpp"

namespace ecoop {

namespace {

void validate_caps(const std::vector<double>& caps) {
  if (caps.empty()) throw std::invalid_argument("caps must be nonempty");
  double prev = 0.0;
  for (double c : caps) {
    if (!std::isfinite(c)) throw std::invalid_argument("caps must be finite");
    if (c < prev - 1e-12) {
      throw std::invalid_argument("caps must be nondecreasing");
    }
    prev = std::max(prev, c);
  }
  if (caps.front() < -1e-12) {
    throw std::invalid_argument("caps must be nonnegative");
  }
}

}  // namespace

std::vector<double> Segmentation::to_powers() const {
  std::vector<double> p;
  p.reserve(breakpoints.back());
  for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j) {
    for (std::size_t i = breakpoints[j]; i < breakpoints[j + 1]; ++i) {
      p.push_back(levels[j]);
    }
  }
  return p;
}

Segmentation min_average_segmentation(const std::vector<double>& caps) {
  validate_caps(caps);
  const std::size_t t = caps.size();

  Segmentation seg;
  seg.breakpoints.push_back(0);
  std::size_t start = 0;
  double base = 0.0;
  while (start < t) {
    std::size_t best_k = start + 1;
    double best_avg = (caps[start] - base) / 1.0;
    for (std::size_t k = start + 2; k <= t; ++k) {
      double avg = (caps[k - 1] - base) / static_cast<double>(k - start);
      // Ties go to the largest index so consecutive levels strictly rise.
      if (avg <= best_avg + 1e-15 * std::max(1.0, std::abs(best_avg))) {
        best_avg = avg;
        best_k = k;
      }
    }
    seg.breakpoints.push_back(best_k);
    seg.levels.push_back(best_avg);
    base = caps[best_k - 1];
    start = best_k;
  }
  return seg;
}

PowerSchedule single_user_dwf(const std::vector<double>& caps) {
  Segmentation seg = min_average_segmentation(caps);
  PowerSchedule out;
  out.power = seg.to_powers();
  // Exact exhaustion per segment: spread cap increments evenly so the prefix
  // at each breakpoint matches the cap bit for bit.
  double base = 0.0;
  for (std::size_t j = 0; j + 1 < seg.breakpoints.size(); ++j) {
    std::size_t lo = seg.breakpoints[j];
    std::size_t hi = seg.breakpoints[j + 1];
    double amount = caps[hi - 1] - base;
    double level = amount / static_cast<double>(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      out.power[i] = std::max(0.0, level);
    }
    base = caps[hi - 1];
  }
  return out;
}

PowerSchedule project_cumulative(const std::vector<double>& v,
                                 const std::vector<double>& caps) {
  validate_caps(caps);
  if (v.size() != caps.size()) {
    throw std::invalid_argument("length mismatch between point and caps");
  }
  const int t = static_cast<int>(v.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(t, t);
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j <= i; ++j) a(i, j) = 1.0;
  }
  Eigen::VectorXd b(t);
  for (int i = 0; i < t; ++i) b[i] = std::max(0.0, caps[i]);
  Eigen::VectorXd point(t);
  for (int i = 0; i < t; ++i) point[i] = v[i];

  Eigen::VectorXd x = detail::project_polyhedron(point, a, b);
  PowerSchedule out;
  out.power.assign(x.data(), x.data() + t);
  for (double& p : out.power) p = std::max(0.0, p);
  return out;
}

}  // namespace ecoop
