#include "ecoop/twoway.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ecoop/kkt.hpp"
#include "ecoop/rates.hpp"
#include "ecoop/tolerances.hpp"
#include "ecoop/waterfill.hpp"

namespace ecoop {

double WaterSystem::total_volume() const {
  double s = 0.0;
  for (double v : volume[0]) s += v;
  for (double v : volume[1]) s += v;
  return s;
}

namespace {

Scenario as_twoway(const Scenario& s) {
  Scenario r = s;
  r.model = Model::TwoWay;
  return r;
}

// Mutable relaxation state. Volumes are power for row 0 and power/alpha for
// row 1, so a down tap moves volume one-for-one. The energy-causality cap on
// cumulative volume in row 0 is c1 - Dcum, in row 1 c2/alpha + Dcum, where
// Dcum is the net volume sent down by each prefix. Right-tap credits always
// equal cap minus cumulative volume, so a full-row re-equalization against
// the true caps is exactly "equalize, letting past flow return".
struct Relaxation {
  std::size_t t = 0;
  double alpha = 1.0;
  double th1 = 1.0, th2 = 1.0;
  bool transfer_enabled = false;
  std::vector<double> cap0, cap1;  // cumulative volume caps sans transfers
  std::vector<double> vol0, vol1;
  std::vector<double> dcum;
  std::vector<Tap> right0, right1, down;

  Relaxation(const EnergyProfile& e1, const EnergyProfile& e2, double a,
             double t1, double t2)
      : t(e1.slots()), alpha(a), th1(t1), th2(t2),
        transfer_enabled(a > 0.0) {
    cap0 = e1.cumulative();
    vol0 = e1.amounts;
    vol1 = e2.amounts;
    if (transfer_enabled) {
      for (double& v : vol1) v /= alpha;
    }
    cap1 = cumulative_sum(vol1);
    dcum.assign(t, 0.0);
    right0.assign(t > 0 ? t - 1 : 0, Tap{});
    right1.assign(t > 0 ? t - 1 : 0, Tap{});
    down.assign(t, Tap{});
  }

  double level0(std::size_t j) const { return (1.0 + vol0[j]) / th1; }
  double level1(std::size_t j) const {
    if (!transfer_enabled) return (1.0 + vol1[j]) / th2;
    return 1.0 / (alpha * th2) + vol1[j] / th2;
  }

  void equalize_row(int u) {
    std::vector<double>& vol = (u == 0) ? vol0 : vol1;
    std::vector<Tap>& taps = (u == 0) ? right0 : right1;
    std::vector<double> caps(t);
    for (std::size_t k = 0; k < t; ++k) {
      double c = (u == 0) ? cap0[k] - dcum[k] : cap1[k] + dcum[k];
      caps[k] = std::max(0.0, c);
    }
    // Down-tap removals can dent the cap curve; the binding cap for a
    // nondecreasing cumulative is the tail minimum.
    for (std::size_t k = t - 1; k-- > 0;) {
      caps[k] = std::min(caps[k], caps[k + 1]);
    }
    std::vector<double> before_cum = cumulative_sum(vol);
    PowerSchedule eq = single_user_dwf(caps);
    std::vector<double> after_cum = cumulative_sum(eq.power);
    for (std::size_t k = 0; k + 1 < t; ++k) {
      taps[k].open = true;
      taps[k].meter += std::max(0.0, vol[k] - eq.power[k]);
      taps[k].credit += before_cum[k] - after_cum[k];
    }
    vol = eq.power;
  }

  // Balances the down tap in slot j toward equal levels; returns the signed
  // volume moved. Downward flow is limited by row 0's cell; upward reflow by
  // the tap's past net flow and row 1's cell.
  double balance_down(std::size_t j, bool allow_reflow) {
    if (!transfer_enabled) return 0.0;
    down[j].open = true;
    double gap = level0(j) - level1(j);
    double dv = gap * th1 * th2 / (th1 + th2);
    dv = std::min(dv, vol0[j]);
    double lo = allow_reflow ? -std::min(down[j].credit, vol1[j]) : 0.0;
    dv = std::max(dv, lo);
    if (std::abs(dv) <= tol::tap_level) return 0.0;
    vol0[j] -= dv;
    vol1[j] += dv;
    for (std::size_t k = j; k < t; ++k) dcum[k] += dv;
    down[j].credit += dv;
    return dv;
  }

  double row1_rate() const {
    const double scale = transfer_enabled ? alpha : 1.0;
    double s = 0.0;
    for (double v : vol1) s += rate_of_power(scale * v);
    return s;
  }

  // Crossing volume earlier is free for row 0 and enlarges every row-1
  // prefix cap, but the local exchange can park volume behind a late tap:
  // each single hop away from that state is level-neutral, so the sweeps
  // stall there. Re-time the net down flow to the earliest causal slots and
  // keep the move only when row 1 strictly gains.
  double retime_down_flow() {
    if (!transfer_enabled || t == 0) return 0.0;
    const double total = dcum[t - 1];
    if (total <= 0.0) return 0.0;
    std::vector<double> p1cum = cumulative_sum(vol0);
    std::vector<double> room(t);
    for (std::size_t k = 0; k < t; ++k) {
      room[k] = cap0[k] - p1cum[k];
    }
    // Maximal nondecreasing minorant keeps per-slot crossings nonnegative.
    for (std::size_t k = t - 1; k-- > 0;) {
      room[k] = std::min(room[k], room[k + 1]);
    }
    std::vector<double> dnew(t);
    double shift = 0.0;
    for (std::size_t k = 0; k < t; ++k) {
      dnew[k] = std::min(total, std::max(0.0, room[k]));
      shift = std::max(shift, dnew[k] - dcum[k]);
    }
    if (shift <= tol::tap_level) return 0.0;
    std::vector<double> caps(t);
    for (std::size_t k = 0; k < t; ++k) {
      caps[k] = std::max(0.0, cap1[k] + dnew[k]);
    }
    for (std::size_t k = t - 1; k-- > 0;) {
      caps[k] = std::min(caps[k], caps[k + 1]);
    }
    PowerSchedule trial = single_user_dwf(caps);
    const double scale = alpha;
    double gain = -row1_rate();
    for (double v : trial.power) gain += rate_of_power(scale * v);
    if (gain <= 1e-12) return 0.0;
    dcum = dnew;
    for (std::size_t j = 0; j < t; ++j) {
      down[j].open = true;
      down[j].credit = dnew[j] - (j > 0 ? dnew[j - 1] : 0.0);
    }
    equalize_row(1);
    return shift;
  }

  WaterSystem to_system() const {
    WaterSystem w;
    w.volume[0] = vol0;
    w.volume[1] = vol1;
    w.area = {th1, th2};
    w.base = {1.0 / th1,
              transfer_enabled ? 1.0 / (alpha * th2) : 1.0 / th2};
    w.alpha = alpha;
    w.right_taps[0] = right0;
    w.right_taps[1] = right1;
    w.down_taps = down;
    for (Tap& d : w.down_taps) d.meter = std::max(0.0, d.credit);
    return w;
  }
};

}  // namespace

TwoDimResult two_dim_dwf(const EnergyProfile& e1, const EnergyProfile& e2,
                         double alpha, double theta1, double theta2,
                         TapOrdering ordering) {
  if (e1.slots() == 0 || e1.slots() != e2.slots()) {
    throw std::invalid_argument("profiles must share a nonempty horizon");
  }
  if (!(theta1 > 0.0) || !(theta2 > 0.0)) {
    throw std::invalid_argument(
        "water system needs strictly positive weights");
  }
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("alpha out of range");
  }
  Relaxation rx(e1, e2, alpha, theta1, theta2);
  const std::size_t t = rx.t;
  TwoDimResult out;

  switch (ordering) {
    case TapOrdering::HorizontalOnly:
      rx.equalize_row(0);
      rx.equalize_row(1);
      out.converged = true;
      break;
    case TapOrdering::HorizontalFirstNoMeters:
      rx.equalize_row(0);
      rx.equalize_row(1);
      for (std::size_t j = 0; j < t; ++j) rx.balance_down(j, false);
      out.converged = true;
      break;
    case TapOrdering::VerticalFirst:
      for (std::size_t j = 0; j < t; ++j) rx.balance_down(j, false);
      rx.equalize_row(0);
      rx.equalize_row(1);
      out.converged = true;
      break;
    case TapOrdering::DownBackwardWithMeters: {
      rx.equalize_row(0);
      rx.equalize_row(1);
      for (int sweep = 0; sweep < tol::tap_sweeps; ++sweep) {
        double moved = 0.0;
        for (std::size_t jj = t; jj-- > 0;) {
          for (int inner = 0; inner < 400; ++inner) {
            double dv = rx.balance_down(jj, true);
            if (dv == 0.0) break;
            rx.equalize_row(0);
            rx.equalize_row(1);
            moved = std::max(moved, std::abs(dv));
          }
        }
        out.sweeps = sweep + 1;
        if (moved <= tol::tap_level) {
          moved = std::max(moved, rx.retime_down_flow());
          if (moved <= tol::tap_level) {
            out.converged = true;
            break;
          }
        }
      }
      break;
    }
  }

  out.system = rx.to_system();
  std::vector<double> p1 = rx.vol0;
  std::vector<double> p2 = rx.vol1;
  if (rx.transfer_enabled) {
    for (double& v : p2) v *= alpha;
  }
  std::vector<double> d(t, 0.0);
  for (std::size_t j = 0; j < t; ++j) {
    d[j] = std::max(0.0, rx.down[j].credit);
    if (d[j] < 1e-12) d[j] = 0.0;
  }
  for (double& v : p1) {
    if (v < 1e-12) v = 0.0;
  }
  for (double& v : p2) {
    if (v < 1e-12) v = 0.0;
  }
  out.p1 = PowerSchedule(std::move(p1));
  out.p2 = PowerSchedule(std::move(p2));
  out.delta = TransferSchedule(std::move(d));
  return out;
}

SolveReport solve_twoway_weighted(const Scenario& s,
                                  std::pair<double, double> theta) {
  Scenario sc = as_twoway(s);
  sc.validate();
  const double th1 = theta.first, th2 = theta.second;
  if (th1 < 0.0 || th2 < 0.0 || (th1 == 0.0 && th2 == 0.0)) {
    throw std::invalid_argument("weights must be nonnegative, not both zero");
  }
  const EnergyProfile e1 = sc.e1_snr();
  const EnergyProfile e2 = sc.e2_snr();
  const std::size_t t = e1.slots();

  SolveReport r;
  if (th2 == 0.0) {
    // Transfers only steal from the prioritized user; both run alone.
    r.p1 = single_user_dwf(e1.cumulative());
    r.p2 = single_user_dwf(e2.cumulative());
    r.delta = TransferSchedule(std::vector<double>(t, 0.0));
    r.method = "independent water-filling";
  } else if (th1 == 0.0) {
    // The unweighted user's only service is donating everything.
    r.p1 = PowerSchedule(std::vector<double>(t, 0.0));
    std::vector<double> merged = e2.amounts;
    for (std::size_t i = 0; i < t; ++i) merged[i] += sc.alpha * e1[i];
    r.p2 = single_user_dwf(cumulative_sum(merged));
    r.delta = TransferSchedule(e1.amounts);
    r.method = "full transfer";
  } else {
    TwoDimResult w = two_dim_dwf(e1, e2, sc.alpha, th1, th2);
    double fill = e1.total() + (sc.alpha > 0.0 ? e2.total() / sc.alpha
                                               : e2.total());
    double drift = std::abs(w.system.total_volume() - fill);
    r.p1 = w.p1;
    r.p2 = w.p2;
    r.delta = w.delta;
    r.method = "two-dimensional water-filling";
    r.checks.push_back({"water volume conserved",
                        drift <= tol::water_conservation *
                                     std::max(1.0, fill),
                        drift});
    r.checks.push_back({"tap relaxation converged", w.converged,
                        static_cast<double>(w.sweeps)});
  }
  r.rate1 = total_rate(r.p1.power);
  r.rate2 = total_rate(r.p2.power);
  r.objective = th1 * r.rate1 + th2 * r.rate2;
  r.kkt = kkt_residuals(sc, theta, r.p1, r.p2, r.delta);
  return r;
}

std::vector<RegionPoint> trace_twoway_region(const Scenario& s,
                                             std::size_t n_points) {
  std::vector<RegionPoint> pts;
  for (const auto& theta : weight_sweep(n_points)) {
    SolveReport rep = solve_twoway_weighted(s, theta);
    RegionPoint p;
    p.theta = theta;
    p.rate1 = rep.rate1;
    p.rate2 = rep.rate2;
    p.p1 = rep.p1;
    p.p2 = rep.p2;
    p.delta = rep.delta;
    p.regime = rep.delta.total() > tol::transfer_active ? "Transfer"
                                                        : "NoTransfer";
    pts.push_back(std::move(p));
  }
  sort_boundary(pts);
  return pts;
}

RatioCheck verify_transfer_ratio(const SolveReport& report,
                                 std::pair<double, double> theta,
                                 double alpha) {
  RatioCheck c;
  if (theta.second == 0.0 || alpha <= 0.0) {
    c.applicable = false;
    return c;
  }
  const double target = theta.first / (alpha * theta.second);
  const std::size_t t = report.delta.slots();
  for (std::size_t i = 0; i < t; ++i) {
    if (report.delta[i] <= tol::transfer_active) continue;
    const double p1 = report.p1[i];
    const double p2 = report.p2[i];
    const double ratio = (1.0 + p1) / (1.0 + p2);
    double dev;
    if (p1 <= tol::transfer_active && p2 <= tol::transfer_active) {
      dev = 0.0;  // both pinned at zero; either side may bind
    } else if (p1 <= tol::transfer_active) {
      dev = std::max(0.0, target - ratio);  // user 1 drained: ratio may exceed
    } else if (p2 <= tol::transfer_active) {
      dev = std::max(0.0, ratio - target);  // user 2 empty: ratio may fall short
    } else {
      dev = std::abs(ratio - target);
    }
    bool ok = dev <= tol::lemma;
    c.per_slot.push_back(
        {"transfer ratio at slot " + std::to_string(i + 1), ok, dev});
    if (!ok) c.pass = false;
  }
  return c;
}

}  // namespace ecoop
