#include "ecoop/mac.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ecoop/kkt.hpp"
#include "ecoop/rates.hpp"
#include "ecoop/solver.hpp"
#include "ecoop/tolerances.hpp"
#include "ecoop/waterfill.hpp"

namespace ecoop {

namespace {

Scenario as_mac(const Scenario& s) {
  Scenario r = s;
  r.model = Model::Mac;
  return r;
}

double sum_rate_of(const PowerSchedule& p1, const PowerSchedule& p2) {
  double r = 0.0;
  for (std::size_t i = 0; i < p1.slots(); ++i) {
    r += rate_of_power(p1[i] + p2[i]);
  }
  return r;
}

void snap_small(std::vector<double>& v) {
  for (double& x : v) {
    if (x < 1e-11) x = 0.0;
  }
}

MacReport assemble(const Scenario& s, std::pair<double, double> theta,
                   PowerSchedule p1, PowerSchedule p2, TransferSchedule d,
                   MacRegime regime) {
  snap_small(p1.power);
  snap_small(p2.power);
  snap_small(d.delta);
  MacReport r;
  r.p1 = std::move(p1);
  r.p2 = std::move(p2);
  r.delta = std::move(d);
  auto corners = pentagon_corners(r.p1, r.p2);
  r.corner_rates = theta.first >= theta.second ? corners.first
                                               : corners.second;
  r.sum_rate = r.corner_rates.first + r.corner_rates.second;
  r.objective = theta.first * r.corner_rates.first +
                theta.second * r.corner_rates.second;
  r.regime = regime;
  Scenario sc = as_mac(s);
  r.kkt = kkt_residuals(sc, theta, r.p1, r.p2, r.delta);
  return r;
}

// Equal weights: any split of the sum-optimal power is optimal; divide each
// slot in proportion to the energy each user still has available, which
// keeps both users causal without repair.
void split_sum_power(const PowerSchedule& sum, const std::vector<double>& c1,
                     const std::vector<double>& c2, PowerSchedule& p1,
                     PowerSchedule& p2) {
  const std::size_t t = sum.slots();
  p1.power.assign(t, 0.0);
  p2.power.assign(t, 0.0);
  double spent1 = 0.0, spent2 = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    const double a1 = std::max(0.0, c1[i] - spent1);
    const double a2 = std::max(0.0, c2[i] - spent2);
    double s = sum[i];
    double x = (a1 + a2 > 0.0) ? s * a1 / (a1 + a2) : 0.0;
    x = std::min(x, a1);
    double y = s - x;
    if (y > a2) {
      y = a2;
      x = std::min(a1, s - y);
    }
    p1.power[i] = x;
    p2.power[i] = y;
    spent1 += x;
    spent2 += y;
  }
}

}  // namespace

std::pair<std::pair<double, double>, std::pair<double, double>>
pentagon_corners(const PowerSchedule& p1, const PowerSchedule& p2) {
  if (p1.slots() != p2.slots()) {
    throw std::invalid_argument("schedules must share a horizon");
  }
  const double r1max = total_rate(p1.power);
  const double r2max = total_rate(p2.power);
  const double rsum = sum_rate_of(p1, p2);
  return {{r1max, rsum - r1max}, {rsum - r2max, r2max}};
}

double full_transfer_threshold(double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument(
        "threshold undefined at alpha = 0: transfer is never forced");
  }
  return 1.0 / alpha;
}

MacReport solve_mac_weighted(const Scenario& s,
                             std::pair<double, double> theta) {
  Scenario sc = as_mac(s);
  sc.validate();
  const double th1 = theta.first, th2 = theta.second;
  if (th1 < 0.0 || th2 < 0.0 || (th1 == 0.0 && th2 == 0.0)) {
    throw std::invalid_argument("weights must be nonnegative, not both zero");
  }
  const EnergyProfile e1 = sc.e1_snr();
  const EnergyProfile e2 = sc.e2_snr();
  const std::vector<double> c1 = e1.cumulative();
  const std::vector<double> c2 = e2.cumulative();
  const std::size_t t = c1.size();
  const double alpha = sc.alpha;
  TransferSchedule zero(std::vector<double>(t, 0.0));

  if (th1 >= th2) {
    // The heavier-weighted user never benefits from giving energy away.
    if (th2 == 0.0) {
      return assemble(sc, theta, single_user_dwf(c1), single_user_dwf(c2),
                      zero, MacRegime::NoTransfer);
    }
    if (th1 == th2) {
      std::vector<double> merged(t);
      for (std::size_t i = 0; i < t; ++i) merged[i] = c1[i] + c2[i];
      PowerSchedule sum = single_user_dwf(merged);
      PowerSchedule p1, p2;
      split_sum_power(sum, c1, c2, p1, p2);
      return assemble(sc, theta, std::move(p1), std::move(p2), zero,
                      MacRegime::NoTransfer);
    }
    ConcaveObjective obj;
    auto grad_p1 = [=](double p1i, double p2i) {
      return (th1 - th2) * rate_slope(p1i) + th2 * rate_slope(p1i + p2i);
    };
    obj.value = [=](const std::vector<double>& x) {
      double v = 0.0;
      for (std::size_t i = 0; i < t; ++i) {
        v += (th1 - th2) * rate_of_power(x[i]) +
             th2 * rate_of_power(x[i] + x[t + i]);
      }
      return v;
    };
    obj.gradient = [=](const std::vector<double>& x) {
      std::vector<double> g(3 * t, 0.0);
      for (std::size_t i = 0; i < t; ++i) {
        g[i] = grad_p1(x[i], x[t + i]);
        g[t + i] = th2 * rate_slope(x[i] + x[t + i]);
      }
      return g;
    };
    obj.hessian = [=](const std::vector<double>& x) {
      std::vector<std::vector<double>> h(3 * t,
                                         std::vector<double>(3 * t, 0.0));
      const double c = 0.5 / kLn2;
      for (std::size_t i = 0; i < t; ++i) {
        double own = 1.0 + x[i];
        double both = 1.0 + x[i] + x[t + i];
        double dsum = -c * th2 / (both * both);
        h[i][i] = -(th1 - th2) * c / (own * own) + dsum;
        h[i][t + i] = dsum;
        h[t + i][i] = dsum;
        h[t + i][t + i] = dsum;
      }
      return h;
    };
    // alpha = 0 and no budget row pin delta at zero: spending transfer only
    // costs projection distance and tightens user 1's rows.
    CausalityPolytope poly{e1, e2, 0.0, false};
    SolverResult sol = maximize_concave_over_causality(obj, poly, 1e-9);
    return assemble(sc, theta, sol.p1, sol.p2, zero, MacRegime::NoTransfer);
  }

  if (alpha > 0.0 && th2 * alpha >= th1) {
    // Past the threshold the marginal value of a transferred joule beats any
    // use user 1 has for it.
    std::vector<double> merged(t);
    for (std::size_t i = 0; i < t; ++i) merged[i] = c2[i] + alpha * c1[i];
    PowerSchedule p2 = single_user_dwf(merged);
    PowerSchedule p1(std::vector<double>(t, 0.0));
    return assemble(sc, theta, std::move(p1), std::move(p2),
                    TransferSchedule(e1.amounts), MacRegime::FullTransfer);
  }

  if (th1 == 0.0) {
    // alpha = 0 with all weight on user 2: donations are pointless, user 1
    // rides along at the free corner rate.
    return assemble(sc, theta, single_user_dwf(c1), single_user_dwf(c2),
                    zero, MacRegime::NoTransfer);
  }

  ConcaveObjective obj;
  obj.value = [=](const std::vector<double>& x) {
    double v = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
      v += th1 * rate_of_power(x[i] + x[t + i]) +
           (th2 - th1) * rate_of_power(x[t + i]);
    }
    return v;
  };
  obj.gradient = [=](const std::vector<double>& x) {
    std::vector<double> g(3 * t, 0.0);
    for (std::size_t i = 0; i < t; ++i) {
      g[i] = th1 * rate_slope(x[i] + x[t + i]);
      g[t + i] = th1 * rate_slope(x[i] + x[t + i]) +
                 (th2 - th1) * rate_slope(x[t + i]);
    }
    return g;
  };
  obj.hessian = [=](const std::vector<double>& x) {
    std::vector<std::vector<double>> h(3 * t,
                                       std::vector<double>(3 * t, 0.0));
    const double c = 0.5 / kLn2;
    for (std::size_t i = 0; i < t; ++i) {
      double own = 1.0 + x[t + i];
      double both = 1.0 + x[i] + x[t + i];
      double dsum = -c * th1 / (both * both);
      h[i][i] = dsum;
      h[i][t + i] = dsum;
      h[t + i][i] = dsum;
      h[t + i][t + i] = dsum - (th2 - th1) * c / (own * own);
    }
    return h;
  };
  CausalityPolytope poly{e1, e2, alpha, true};
  SolverResult sol = maximize_concave_over_causality(obj, poly, 1e-9);
  return assemble(sc, theta, sol.p1, sol.p2, sol.delta, MacRegime::General);
}

std::vector<RegionPoint> trace_mac_region(const Scenario& s,
                                          std::size_t n_points) {
  std::vector<RegionPoint> pts;
  auto regime_name = [](MacRegime r) {
    switch (r) {
      case MacRegime::NoTransfer: return "NoTransfer";
      case MacRegime::General: return "General";
      case MacRegime::FullTransfer: return "FullTransfer";
    }
    return "NoTransfer";
  };
  for (const auto& theta : weight_sweep(n_points)) {
    MacReport rep = solve_mac_weighted(s, theta);
    auto corners = pentagon_corners(rep.p1, rep.p2);
    auto emit = [&](std::pair<double, double> rates) {
      RegionPoint p;
      p.theta = theta;
      p.rate1 = rates.first;
      p.rate2 = rates.second;
      p.p1 = rep.p1;
      p.p2 = rep.p2;
      p.delta = rep.delta;
      p.regime = regime_name(rep.regime);
      pts.push_back(std::move(p));
    };
    if (theta.first >= theta.second) {
      emit(corners.first);
      emit(corners.second);
    } else {
      emit(rep.corner_rates);
    }
  }
  // Dominant points only: sweep from high rate1 keeping strict rate2 gains;
  // within a rate1 tie the best rate2 survives.
  std::sort(pts.begin(), pts.end(), [](const RegionPoint& a,
                                       const RegionPoint& b) {
    if (a.rate1 != b.rate1) return a.rate1 > b.rate1;
    return a.rate2 > b.rate2;
  });
  std::vector<RegionPoint> frontier;
  double best_r2 = -1.0;
  for (auto& p : pts) {
    if (p.rate2 > best_r2 + 1e-12) {
      best_r2 = p.rate2;
      frontier.push_back(std::move(p));
    }
  }
  sort_boundary(frontier);
  return frontier;
}

}  // namespace ecoop
