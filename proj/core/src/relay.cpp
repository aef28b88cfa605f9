#include "ecoop/relay.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include "ecoop/feasibility.hpp"
#include "ecoop/kkt.hpp"
#include "ecoop/rates.hpp"
#include "ecoop/tolerances.hpp"
#include "ecoop/waterfill.hpp"

namespace ecoop {

namespace {

Scenario as_relay(const Scenario& s) {
  Scenario r = s;
  r.model = Model::Relay;
  return r;
}

double dwf_bits(const std::vector<double>& caps) {
  PowerSchedule p = single_user_dwf(caps);
  return total_rate(p.power);
}

void snap_small(std::vector<double>& v, double eps = 1e-11) {
  for (double& x : v) {
    if (x < eps) x = 0.0;
  }
}

// Lexicographically-earliest cumulative transfer with the same total:
// cram the final total as early as the source's leftover energy permits.
TransferSchedule earliest_delta(const std::vector<double>& c1,
                                const PowerSchedule& p1,
                                const TransferSchedule& delta) {
  const std::size_t t = c1.size();
  std::vector<double> q1 = p1.cumulative();
  std::vector<double> room(t);
  for (std::size_t k = 0; k < t; ++k) room[k] = std::max(0.0, c1[k] - q1[k]);
  for (std::size_t k = t - 1; k-- > 0;) room[k] = std::min(room[k], room[k + 1]);
  const double total = delta.cumulative().back();
  std::vector<double> d(t);
  double prev = 0.0;
  for (std::size_t k = 0; k < t; ++k) {
    double cum = std::min(total, room[k]);
    d[k] = std::max(0.0, cum - prev);
    prev = std::max(prev, cum);
  }
  snap_small(d);
  return TransferSchedule(d);
}

// Minimal monotone cumulative transfer supporting p2, placed as early as the
// window [first_slot..T] and the source's leftover energy allow.
TransferSchedule supporting_delta(const std::vector<double>& c1,
                                  const std::vector<double>& c2, double alpha,
                                  const PowerSchedule& p1,
                                  const PowerSchedule& p2,
                                  std::size_t first_slot) {
  const std::size_t t = c1.size();
  std::vector<double> q1 = p1.cumulative();
  std::vector<double> q2 = p2.cumulative();
  std::vector<double> need(t, 0.0);
  if (alpha > 0.0) {
    double run = 0.0;
    for (std::size_t k = 0; k < t; ++k) {
      run = std::max(run, (q2[k] - c2[k]) / alpha);
      need[k] = std::max(0.0, run);
    }
  }
  std::vector<double> room(t);
  for (std::size_t k = 0; k < t; ++k) room[k] = std::max(0.0, c1[k] - q1[k]);
  for (std::size_t k = t - 1; k-- > 0;) room[k] = std::min(room[k], room[k + 1]);
  const double total = need.back();
  std::vector<double> d(t);
  double prev = 0.0;
  for (std::size_t k = 0; k < t; ++k) {
    double cum = (k + 1 <= first_slot) ? 0.0 : std::min(total, room[k]);
    cum = std::max(cum, need[k]);
    d[k] = std::max(0.0, cum - prev);
    prev = std::max(prev, cum);
  }
  snap_small(d);
  return TransferSchedule(d);
}

// Matched powers and supporting transfer for the single-crossing closed
// form. Every per-slot merged cap can hold while the cross constraint
// q_j + alpha*q_l <= c2_j + alpha*c1_l (j < l) still binds: the relay then
// needs volume earlier than the source can spare it, and the construction
// is not energy-causal. Callers fall back to the general solver on nullopt.
std::optional<std::pair<PowerSchedule, TransferSchedule>>
single_crossing_candidate(const Scenario& s) {
  const EnergyProfile e1 = s.e1_snr();
  const EnergyProfile e2 = s.e2_snr();
  auto crossing = detect_single_crossing(e1, e2);
  if (!crossing) return std::nullopt;
  const std::size_t itilde = *crossing;
  const double alpha = s.alpha;
  const std::vector<double> c1 = e1.cumulative();
  const std::vector<double> c2 = e2.cumulative();
  const std::size_t t = c1.size();

  // Matched powers: water-fill the binding side of the merged profile.
  std::vector<double> caps(t);
  for (std::size_t k = 0; k < t; ++k) {
    caps[k] = std::min(c1[k], (c2[k] + alpha * c1[k]) / (1.0 + alpha));
  }
  PowerSchedule p = single_user_dwf(caps);

  TransferSchedule delta;
  bool per_slot_ok = false;
  if (itilde == 0 && alpha > 0.0) {
    // Slotwise split of the merged profile, valid when it never reverses.
    std::vector<double> d(t);
    per_slot_ok = true;
    for (std::size_t i = 0; i < t; ++i) {
      d[i] = (e1[i] - e2[i]) / (1.0 + alpha);
      if (d[i] < -tol::feasibility) {
        per_slot_ok = false;
        break;
      }
      d[i] = std::max(0.0, d[i]);
    }
    if (per_slot_ok) delta = TransferSchedule(std::move(d));
  }
  if (!per_slot_ok) {
    delta = supporting_delta(c1, c2, alpha, p, p, itilde);
  }
  if (!feasibility_violations(s, p, p, delta).empty()) return std::nullopt;
  return std::make_pair(std::move(p), std::move(delta));
}

RelayReport assemble(const Scenario& s, PowerSchedule p1, PowerSchedule p2,
                     TransferSchedule delta, RelayPath path) {
  snap_small(p1.power);
  snap_small(p2.power);
  snap_small(delta.delta);
  RelayReport r;
  r.p_source = std::move(p1);
  r.p_relay = std::move(p2);
  r.delta = std::move(delta);
  r.throughput = total_rate(r.p_relay.power);
  r.path = path;
  Scenario sc = as_relay(s);
  r.kkt = kkt_residuals(sc, {1.0, 1.0}, r.p_source, r.p_relay, r.delta);
  r.lemma_results = verify_relay_lemmas(r, sc);
  return r;
}

}  // namespace

std::optional<std::size_t> detect_single_crossing(const EnergyProfile& e1,
                                                  const EnergyProfile& e2) {
  if (e1.slots() != e2.slots()) {
    throw std::invalid_argument("profiles must share a horizon");
  }
  const std::vector<double> c1 = e1.cumulative();
  const std::vector<double> c2 = e2.cumulative();
  const std::size_t t = c1.size();
  std::size_t itilde = 0;
  while (itilde < t && c2[itilde] >= c1[itilde] - tol::feasibility) ++itilde;
  for (std::size_t i = itilde; i < t; ++i) {
    if (c2[i] > c1[i] + tol::feasibility) return std::nullopt;
  }
  return itilde;
}

RelayReport solve_relay_single_crossing(const Scenario& s) {
  s.validate();
  if (!detect_single_crossing(s.e1_snr(), s.e2_snr())) {
    throw std::invalid_argument(
        "profiles do not have the single-crossing shape");
  }
  auto cand = single_crossing_candidate(s);
  if (!cand) {
    throw std::invalid_argument(
        "matched closed form is not energy-causal for this instance");
  }
  PowerSchedule p = std::move(cand->first);
  return assemble(s, p, p, std::move(cand->second),
                  RelayPath::SingleCrossing);
}

RelayReport solve_relay_source_initial(const Scenario& s) {
  s.validate();
  const EnergyProfile e1 = s.e1_snr();
  const EnergyProfile e2 = s.e2_snr();
  const std::size_t t = e1.slots();
  const double e_total = e1[0];
  for (std::size_t i = 1; i < t; ++i) {
    if (e1[i] > 1e-12 * std::max(1.0, e_total)) {
      throw std::invalid_argument("source energy must arrive in slot 1");
    }
  }
  const double alpha = s.alpha;
  const double td = static_cast<double>(t);

  auto relay_caps = [&](double d1) {
    std::vector<double> prof = e2.amounts;
    prof[0] += alpha * d1;
    return cumulative_sum(prof);
  };
  auto source_bits = [&](double d1) {
    return td * rate_of_power((e_total - d1) / td);
  };

  double d1 = 0.0;
  if (alpha > 0.0 && dwf_bits(relay_caps(0.0)) < source_bits(0.0) - 1e-12) {
    // Unique root: deliverable bits rise with the transfer while the source's
    // own bits fall.
    double lo = 0.0, hi = e_total;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (dwf_bits(relay_caps(mid)) >= source_bits(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
      if (hi - lo <= 1e-12 * std::max(1.0, e_total)) break;
    }
    d1 = 0.5 * (lo + hi);
  }

  std::vector<double> d(t, 0.0);
  d[0] = d1;
  PowerSchedule p1(std::vector<double>(t, (e_total - d1) / td));
  PowerSchedule p2 = single_user_dwf(relay_caps(d1));

  // Relay abundance: deliver exactly the source's bits by scaling its
  // water-filled rates down; scaling preserves monotone rates, so data
  // causality against the flat source ramp stays intact.
  double have = total_rate(p2.power);
  double want = total_rate(p1.power);
  if (have > want + 1e-12 && have > 0.0) {
    double scale = want / have;
    for (double& pw : p2.power) {
      pw = power_of_rate(rate_of_power(pw) * scale);
    }
  } else if (want > have + 1e-9) {
    // Dead transfer channel with a starved relay: the source slows to the
    // deliverable stream; its leftover energy has nowhere to go.
    p1 = PowerSchedule(std::vector<double>(t, power_of_rate(have / td)));
  }
  return assemble(s, std::move(p1), std::move(p2),
                  TransferSchedule(std::move(d)), RelayPath::SourceInitial);
}

namespace detail {

RelayReport solve_relay_general(const Scenario& s, unsigned start_jitter) {
  s.validate();
  const EnergyProfile e1 = s.e1_snr();
  const EnergyProfile e2 = s.e2_snr();
  const double alpha = s.alpha;
  const std::vector<double> c1 = e1.cumulative();
  const std::vector<double> c2 = e2.cumulative();
  const std::size_t t = c1.size();

  // Presolve: variables pinned to zero by empty prefixes. Zero source caps
  // pin r1 and d; the relay is additionally pinned while it has neither
  // harvested energy nor any transferable supply to draw on.
  std::size_t pin1 = 0;
  while (pin1 < t && c1[pin1] <= 0.0) ++pin1;
  std::size_t pin2 = 0;
  while (pin2 < t &&
         (c2[pin2] <= 0.0 && (alpha <= 0.0 || c1[pin2] <= 0.0))) {
    ++pin2;
  }
  pin2 = std::max(pin2, pin1);  // no bits to forward before the source starts

  // Free-variable indexing: r1 and d live on slots >= pin1, r2 on >= pin2.
  std::vector<int> idx_r1(t, -1), idx_r2(t, -1), idx_d(t, -1);
  int nv = 0;
  for (std::size_t i = pin1; i < t; ++i) idx_r1[i] = nv++;
  for (std::size_t i = pin2; i < t; ++i) idx_r2[i] = nv++;
  for (std::size_t i = pin1; i < t; ++i) idx_d[i] = nv++;

  PowerSchedule p1(std::vector<double>(t, 0.0));
  PowerSchedule p2(std::vector<double>(t, 0.0));
  TransferSchedule dd(std::vector<double>(t, 0.0));
  if (nv == 0) {
    return assemble(s, std::move(p1), std::move(p2), std::move(dd),
                    RelayPath::General);
  }

  // Constraint rows kept: source energy and transfer-free data rows are
  // meaningful from pin1 on; relay energy rows from pin2 on (earlier rows
  // are identically 0 <= 0 and would break the barrier).
  struct Row {
    enum Kind { SourceEnergy, RelayEnergy, Data } kind;
    std::size_t k;
  };
  std::vector<Row> rows;
  for (std::size_t k = pin1; k < t; ++k) rows.push_back({Row::SourceEnergy, k});
  for (std::size_t k = pin2; k < t; ++k) rows.push_back({Row::RelayEnergy, k});
  for (std::size_t k = pin2; k < t; ++k) rows.push_back({Row::Data, k});

  const double ln4 = 2.0 * kLn2;
  auto pw = [&](double r) { return std::expm1(ln4 * r); };
  auto dpw = [&](double r) { return ln4 * std::exp(ln4 * r); };

  // Strictly interior start.
  double minpos1 = 0.0;
  for (std::size_t k = pin1; k < t; ++k) {
    if (c1[k] > 0.0) {
      minpos1 = (minpos1 == 0.0) ? c1[k] : std::min(minpos1, c1[k]);
    }
  }
  const double td = static_cast<double>(t);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nv);
  std::mt19937 rng(start_jitter);
  std::uniform_real_distribution<double> unif(0.75, 1.25);
  auto jig = [&](double v) { return start_jitter ? v * unif(rng) : v; };
  for (std::size_t i = pin1; i < t; ++i) {
    double di = e1[i] * 0.5 + minpos1 / (8.0 * td);
    x[idx_d[i]] = jig(di);
    double p1i = e1[i] / 8.0 + minpos1 / (16.0 * td);
    x[idx_r1[i]] = jig(rate_of_power(p1i));
  }
  for (double shrink = 0.5;; shrink *= 0.5) {
    if (shrink < 1e-9) break;
    bool ok = true;
    for (std::size_t i = pin2; i < t; ++i) {
      x[idx_r2[i]] = shrink * x[idx_r1[i] >= 0 ? idx_r1[i] : idx_r2[i]] *
                     (idx_r1[i] >= 0 ? 1.0 : 0.0);
      if (idx_r1[i] < 0) x[idx_r2[i]] = shrink * 1e-3;
    }
    // check relay energy strict
    double spent = 0.0, dsum = 0.0;
    std::vector<double> dcum(t, 0.0);
    double run = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
      if (idx_d[i] >= 0) run += x[idx_d[i]];
      dcum[i] = run;
    }
    (void)dsum;
    ok = true;
    spent = 0.0;
    for (std::size_t k = pin2; k < t && ok; ++k) {
      spent = 0.0;
      for (std::size_t i = pin2; i <= k; ++i) spent += pw(x[idx_r2[i]]);
      if (!(spent < c2[k] + alpha * dcum[k])) ok = false;
    }
    if (ok) break;
  }

  auto slacks = [&](const Eigen::VectorXd& v, std::vector<double>& out) {
    out.assign(rows.size(), 0.0);
    std::vector<double> cum_p1(t, 0.0), cum_p2(t, 0.0), cum_d(t, 0.0),
        cum_r1(t, 0.0), cum_r2(t, 0.0);
    double a1 = 0, a2 = 0, ad = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < t; ++i) {
      if (idx_r1[i] >= 0) {
        a1 += pw(v[idx_r1[i]]);
        b1 += v[idx_r1[i]];
      }
      if (idx_r2[i] >= 0) {
        a2 += pw(v[idx_r2[i]]);
        b2 += v[idx_r2[i]];
      }
      if (idx_d[i] >= 0) ad += v[idx_d[i]];
      cum_p1[i] = a1;
      cum_p2[i] = a2;
      cum_d[i] = ad;
      cum_r1[i] = b1;
      cum_r2[i] = b2;
    }
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const Row& r = rows[j];
      switch (r.kind) {
        case Row::SourceEnergy:
          out[j] = c1[r.k] - cum_p1[r.k] - cum_d[r.k];
          break;
        case Row::RelayEnergy:
          out[j] = c2[r.k] + alpha * cum_d[r.k] - cum_p2[r.k];
          break;
        case Row::Data:
          out[j] = cum_r1[r.k] - cum_r2[r.k];
          break;
      }
    }
  };

  std::vector<double> sl;
  slacks(x, sl);
  for (double v : sl) {
    if (!(v > 0.0)) {
      // Fall back to a uniformly tiny interior point.
      for (int j = 0; j < nv; ++j) x[j] = 1e-6;
      for (std::size_t i = pin2; i < t; ++i) x[idx_r2[i]] = 2.5e-7;
      break;
    }
  }

  auto barrier_value = [&](const Eigen::VectorXd& v, double tau, bool& ok) {
    std::vector<double> ss;
    slacks(v, ss);
    double obj = 0.0;
    for (std::size_t i = pin2; i < t; ++i) obj += v[idx_r2[i]];
    double phi = -obj;
    ok = true;
    for (double sv : ss) {
      if (!(sv > 0.0)) {
        ok = false;
        return 0.0;
      }
      phi -= tau * std::log(sv);
    }
    for (int j = 0; j < nv; ++j) {
      if (!(v[j] > 0.0)) {
        ok = false;
        return 0.0;
      }
      phi -= tau * std::log(v[j]);
    }
    return phi;
  };

  for (double tau = 1.0; tau > 5e-13; tau *= 0.12) {
    for (int newton = 0; newton < 80; ++newton) {
      std::vector<double> ss;
      slacks(x, ss);
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(nv);
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(nv, nv);
      for (std::size_t i = pin2; i < t; ++i) grad[idx_r2[i]] -= 1.0;
      for (int j = 0; j < nv; ++j) {
        grad[j] -= tau / x[j];
        hess(j, j) += tau / (x[j] * x[j]);
      }
      for (std::size_t j = 0; j < rows.size(); ++j) {
        const Row& r = rows[j];
        const double sj = ss[j];
        Eigen::VectorXd gj = Eigen::VectorXd::Zero(nv);
        switch (r.kind) {
          case Row::SourceEnergy:
            for (std::size_t i = pin1; i <= r.k; ++i) {
              gj[idx_r1[i]] = dpw(x[idx_r1[i]]);
              gj[idx_d[i]] = 1.0;
              hess(idx_r1[i], idx_r1[i]) +=
                  tau / sj * ln4 * dpw(x[idx_r1[i]]);
            }
            break;
          case Row::RelayEnergy:
            for (std::size_t i = pin1; i <= r.k; ++i) {
              if (idx_r2[i] >= 0) {
                gj[idx_r2[i]] = dpw(x[idx_r2[i]]);
                hess(idx_r2[i], idx_r2[i]) +=
                    tau / sj * ln4 * dpw(x[idx_r2[i]]);
              }
              gj[idx_d[i]] = -alpha;
            }
            break;
          case Row::Data:
            for (std::size_t i = pin1; i <= r.k; ++i) {
              if (idx_r1[i] >= 0) gj[idx_r1[i]] = -1.0;
              if (idx_r2[i] >= 0) gj[idx_r2[i]] = 1.0;
            }
            break;
        }
        grad += tau / sj * gj;
        hess += (tau / (sj * sj)) * (gj * gj.transpose());
      }

      Eigen::VectorXd step = hess.ldlt().solve(-grad);
      double ts = 1.0;
      bool ok = false;
      double phi0 = barrier_value(x, tau, ok);
      if (!ok) break;
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt) {
        Eigen::VectorXd cand = x + ts * step;
        bool cok = false;
        double phic = barrier_value(cand, tau, cok);
        if (cok && phic <= phi0 - 1e-14 * std::abs(phi0)) {
          x = cand;
          moved = true;
          break;
        }
        if (cok && phic <= phi0) {
          x = cand;
          moved = true;
          break;
        }
        ts *= 0.5;
      }
      if (!moved) break;
      if (step.lpNorm<Eigen::Infinity>() * ts <= 1e-12) break;
    }
  }

  // Crossover polish. The barrier stops with primal wobble around 1e-5
  // along flat directions, enough to trip the exhaustion checks downstream.
  // Clamp the manifold it identified (tight rows, zero bounds) and take
  // exact Newton steps on that equality system; adopt the result only if it
  // stays feasible and loses no value.
  {
    std::vector<double> ss;
    slacks(x, ss);
    const double row_scale = std::max(1.0, c1.back());
    std::vector<int> free_of(nv, -1);
    std::vector<int> var_of;
    for (int j = 0; j < nv; ++j) {
      if (x[j] > 1e-7) {
        free_of[j] = static_cast<int>(var_of.size());
        var_of.push_back(j);
      }
    }
    std::vector<std::size_t> act;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (ss[j] <= 1e-6 * row_scale) act.push_back(j);
    }
    const int nf = static_cast<int>(var_of.size());
    const int na = static_cast<int>(act.size());
    if (nf > 0 && na > 0) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(nv);
      for (int j = 0; j < nv; ++j) v[j] = (free_of[j] >= 0) ? x[j] : 0.0;
      const double tau_end = 6e-13;
      Eigen::VectorXd lam(na);
      for (int a = 0; a < na; ++a) {
        lam[a] = tau_end / std::max(ss[act[a]], 1e-14);
      }
      auto grad_row = [&](const Row& r, const Eigen::VectorXd& vv,
                          Eigen::VectorXd& g) {
        g.setZero();
        switch (r.kind) {
          case Row::SourceEnergy:
            for (std::size_t i = pin1; i <= r.k; ++i) {
              if (free_of[idx_r1[i]] >= 0) {
                g[free_of[idx_r1[i]]] = -dpw(vv[idx_r1[i]]);
              }
              if (free_of[idx_d[i]] >= 0) g[free_of[idx_d[i]]] = -1.0;
            }
            break;
          case Row::RelayEnergy:
            for (std::size_t i = pin1; i <= r.k; ++i) {
              if (idx_r2[i] >= 0 && free_of[idx_r2[i]] >= 0) {
                g[free_of[idx_r2[i]]] = -dpw(vv[idx_r2[i]]);
              }
              if (free_of[idx_d[i]] >= 0) g[free_of[idx_d[i]]] = alpha;
            }
            break;
          case Row::Data:
            for (std::size_t i = pin1; i <= r.k; ++i) {
              if (idx_r1[i] >= 0 && free_of[idx_r1[i]] >= 0) {
                g[free_of[idx_r1[i]]] = 1.0;
              }
              if (idx_r2[i] >= 0 && free_of[idx_r2[i]] >= 0) {
                g[free_of[idx_r2[i]]] = -1.0;
              }
            }
            break;
        }
      };
      bool polished = false;
      for (int it = 0; it < 60; ++it) {
        std::vector<double> sv;
        slacks(v, sv);
        Eigen::VectorXd f1 = Eigen::VectorXd::Zero(nf);
        for (std::size_t i = pin2; i < t; ++i) {
          if (free_of[idx_r2[i]] >= 0) f1[free_of[idx_r2[i]]] += 1.0;
        }
        Eigen::MatrixXd g_act(na, nf);
        Eigen::VectorXd f2(na);
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nf, nf);
        Eigen::VectorXd gr(nf);
        for (int a = 0; a < na; ++a) {
          const Row& r = rows[act[a]];
          grad_row(r, v, gr);
          // F1 uses d(slack)/dv directly: stationarity of obj + lam*slack.
          g_act.row(a) = gr.transpose();
          f1 += lam[a] * gr;
          f2[a] = sv[act[a]];
          if (r.kind == Row::SourceEnergy) {
            for (std::size_t i = pin1; i <= r.k; ++i) {
              int fj = free_of[idx_r1[i]];
              if (fj >= 0) h(fj, fj) -= lam[a] * ln4 * dpw(v[idx_r1[i]]);
            }
          } else if (r.kind == Row::RelayEnergy) {
            for (std::size_t i = pin1; i <= r.k; ++i) {
              if (idx_r2[i] < 0) continue;
              int fj = free_of[idx_r2[i]];
              if (fj >= 0) h(fj, fj) -= lam[a] * ln4 * dpw(v[idx_r2[i]]);
            }
          }
        }
        double res = std::max(f1.lpNorm<Eigen::Infinity>(),
                              f2.lpNorm<Eigen::Infinity>());
        if (res <= 1e-12 * row_scale) {
          polished = true;
          break;
        }
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nf + na, nf + na);
        kkt.topLeftCorner(nf, nf) = h;
        kkt.topRightCorner(nf, na) = g_act.transpose();
        kkt.bottomLeftCorner(na, nf) = g_act;
        Eigen::VectorXd rhs(nf + na);
        rhs.head(nf) = -f1;
        rhs.tail(na) = -f2;
        Eigen::VectorXd step = kkt.fullPivLu().solve(rhs);
        if (!step.allFinite()) break;
        for (int j = 0; j < nf; ++j) v[var_of[j]] += step[j];
        lam += step.tail(na);
        bool sane = true;
        for (int j = 0; j < nf; ++j) {
          if (!(v[var_of[j]] > -1e-9)) sane = false;
          if (v[var_of[j]] < 0.0) v[var_of[j]] = 0.0;
        }
        if (!sane) break;
      }
      if (polished) {
        std::vector<double> sv;
        slacks(v, sv);
        bool feas = true;
        for (double s_j : sv) {
          if (s_j < -1e-9 * row_scale) feas = false;
        }
        double obj0 = 0.0, obj1 = 0.0;
        for (std::size_t i = pin2; i < t; ++i) {
          obj0 += x[idx_r2[i]];
          obj1 += v[idx_r2[i]];
        }
        if (feas && obj1 >= obj0 - 1e-9) x = v;
      }
    }
  }

  for (std::size_t i = 0; i < t; ++i) {
    if (idx_r1[i] >= 0) p1.power[i] = std::max(0.0, pw(x[idx_r1[i]]));
    if (idx_r2[i] >= 0) p2.power[i] = std::max(0.0, pw(x[idx_r2[i]]));
    if (idx_d[i] >= 0) dd.delta[i] = std::max(0.0, x[idx_d[i]]);
  }
  TransferSchedule canon = earliest_delta(c1, p1, dd);
  return assemble(s, std::move(p1), std::move(p2), std::move(canon),
                  RelayPath::General);
}

}  // namespace detail

std::vector<LemmaResult> verify_relay_lemmas(const RelayReport& report,
                                             const Scenario& s) {
  Scenario sc = as_relay(s);
  sc.validate();
  if (!feasibility_violations(sc, report.p_source, report.p_relay, report.delta)
           .empty() ||
      !data_causality_violations(report.p_source, report.p_relay).empty()) {
    throw std::invalid_argument("lemma checks need a feasible report");
  }
  const std::vector<double> c1 = sc.e1_snr().cumulative();
  const std::vector<double> c2 = sc.e2_snr().cumulative();
  const std::vector<double> q1 = report.p_source.cumulative();
  const std::vector<double> q2 = report.p_relay.cumulative();
  const std::vector<double> dcum = report.delta.cumulative();
  const std::vector<double> r1 = rates_of_powers(report.p_source.power);
  const std::vector<double> r2 = rates_of_powers(report.p_relay.power);
  const std::vector<double> b1 = cumulative_sum(r1);
  const std::vector<double> b2 = cumulative_sum(r2);
  const std::size_t t = c1.size();

  std::vector<LemmaResult> out;

  double l1 = std::abs(b2.back() - b1.back());
  out.push_back({"no data left at the relay", l1 <= tol::lemma, l1});

  double l2 = std::abs(q1.back() - (c1.back() - dcum.back()));
  bool l2_pass = l2 <= tol::lemma;
  // With a dead transfer channel, unspent source energy cannot be handed to
  // the relay; the exhaustion argument only binds when transfer works.
  if (!l2_pass && sc.alpha <= 1e-12 && l1 <= tol::lemma) l2_pass = true;
  out.push_back({"source exhausts its energy", l2_pass, l2});

  double l3 = 0.0;
  if (dcum.back() > tol::transfer_active) {
    l3 = std::abs(q2.back() - (c2.back() + sc.alpha * dcum.back()));
  }
  out.push_back({"relay exhausts its energy when transfer happens",
                 l3 <= tol::lemma, l3});

  double power_gap = report.p_source.total() - report.p_relay.total();
  bool l4 = power_gap <= tol::lemma;
  if (l4 && std::abs(power_gap) <= tol::lemma) {
    double dist = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
      dist = std::max(dist,
                      std::abs(report.p_source[i] - report.p_relay[i]));
    }
    if (dist > tol::schedule_equal && std::abs(power_gap) <= tol::schedule_equal) {
      l4 = false;
      power_gap = dist;
    }
  }
  if (l4) {
    try {
      if (!majorizes(r1, r2)) {
        l4 = false;
        power_gap = std::max(power_gap, tol::lemma * 2);
      }
    } catch (const std::invalid_argument&) {
      l4 = false;
      power_gap = std::abs(b1.back() - b2.back());
    }
  }
  out.push_back({"relay spends at least the source's power", l4, power_gap});

  double l5 = 0.0;
  for (std::size_t k = 0; k < t; ++k) {
    if (std::abs(b1[k] - b2[k]) <= tol::lemma) {
      l5 = std::max(l5, q1[k] - q2[k]);
    }
  }
  out.push_back({"relay ahead on energy wherever bits meet", l5 <= tol::lemma,
                 l5});
  return out;
}

RelayReport solve_relay(const Scenario& s) {
  s.validate();
  const EnergyProfile e1 = s.e1_snr();
  const EnergyProfile e2 = s.e2_snr();
  const std::size_t t = e1.slots();

  bool source_initial = e1[0] > 0.0;
  for (std::size_t i = 1; i < t && source_initial; ++i) {
    if (e1[i] > 1e-12 * std::max(1.0, e1[0])) source_initial = false;
  }
  if (source_initial) return solve_relay_source_initial(s);
  if (detect_single_crossing(e1, e2)) {
    if (auto cand = single_crossing_candidate(s)) {
      PowerSchedule p = std::move(cand->first);
      return assemble(s, p, p, std::move(cand->second),
                      RelayPath::SingleCrossing);
    }
  }
  return detail::solve_relay_general(s, 0);
}

}  // namespace ecoop
