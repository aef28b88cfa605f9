#include "ecoop/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ecoop/feasibility.hpp"
#include "ecoop/mac.hpp"
#include "ecoop/rates.hpp"
#include "ecoop/relay.hpp"
#include "ecoop/tolerances.hpp"
#include "ecoop/twoway.hpp"

namespace ecoop {

namespace {

constexpr double kSlack = 1e-9;
constexpr double kTie = 1e-15;

struct EnumBest {
  double bits = -1.0;
  std::vector<double> power;
};

// Exact single-user optimum under prefix energy caps: enumerate every set of
// tight prefixes (segment ends), run each segment flat and exhausted at its
// end, keep the feasible maximum. Caps need not be monotone.
EnumBest enum_best(const std::vector<double>& caps) {
  const std::size_t t = caps.size();
  EnumBest best;
  std::vector<double> power(t, 0.0);
  const unsigned masks = 1u << (t - 1);
  for (unsigned mask = 0; mask < masks; ++mask) {
    double used = 0.0;
    double bits = 0.0;
    bool ok = true;
    std::size_t s = 0;
    for (std::size_t e = 0; e < t && ok; ++e) {
      const bool boundary = e + 1 == t || (mask >> e) & 1u;
      if (!boundary) continue;
      const double len = static_cast<double>(e - s + 1);
      const double p = (caps[e] - used) / len;
      if (p < -1e-12) {
        ok = false;
        break;
      }
      const double pc = std::max(p, 0.0);
      for (std::size_t k = s; k <= e; ++k) {
        power[k] = pc;
        used += pc;
        if (used > caps[k] + kSlack) {
          ok = false;
          break;
        }
      }
      bits += len * rate_of_power(pc);
      s = e + 1;
    }
    if (ok && bits > best.bits) {
      best.bits = bits;
      best.power = power;
    }
  }
  return best;
}

std::vector<double> lin_cumsum(const std::vector<double>& v) {
  std::vector<double> c(v.size());
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += v[i];
    c[i] = s;
  }
  return c;
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - kTie) return true;
    if (a[i] > b[i] + kTie) return false;
  }
  return false;
}

struct Box {
  double lo = 0.0, hi = 0.0;
  double vlo = 0.0, vhi = 0.0;  // hard validity range
  double value(int j) const {
    return hi > lo ? lo + (hi - lo) * j / 8.0 : lo;
  }
  void shrink(double center) {
    const double w = (hi - lo) / 3.0;
    lo = std::clamp(center - 0.5 * w, vlo, std::max(vlo, vhi - w));
    hi = std::min(vhi, lo + w);
  }
};

// ---------------------------------------------------------------------------
// Relay: grid over per-slot (transfer, source power), source causality pruned
// on prefixes, forwarder schedule solved exactly by enumeration over tight
// structures (each segment ends energy-tight or data-tight).

struct RelayInner {
  double bits = -1.0;
  std::vector<double> p2;
};

RelayInner relay_forward_exact(const std::vector<double>& b1,
                               const std::vector<double>& cap2) {
  const std::size_t t = b1.size();
  RelayInner best;
  std::vector<std::size_t> ends;
  std::vector<double> power(t, 0.0);
  const unsigned masks = 1u << (t - 1);
  for (unsigned mask = 0; mask < masks; ++mask) {
    ends.clear();
    for (std::size_t e = 0; e < t; ++e) {
      if (e + 1 == t || (mask >> e) & 1u) ends.push_back(e);
    }
    const unsigned labels = 1u << ends.size();
    for (unsigned lab = 0; lab < labels; ++lab) {
      double spent = 0.0;
      double bits = 0.0;
      bool ok = true;
      std::size_t s = 0;
      for (std::size_t gi = 0; gi < ends.size() && ok; ++gi) {
        const std::size_t e = ends[gi];
        const double len = static_cast<double>(e - s + 1);
        double p, r;
        if ((lab >> gi) & 1u) {
          r = (b1[e] - bits) / len;  // data-tight end
          if (r < -1e-12) {
            ok = false;
            break;
          }
          r = std::max(r, 0.0);
          p = power_of_rate(r);
        } else {
          p = (cap2[e] - spent) / len;  // energy-tight end
          if (p < -1e-12) {
            ok = false;
            break;
          }
          p = std::max(p, 0.0);
          r = rate_of_power(p);
        }
        for (std::size_t k = s; k <= e; ++k) {
          power[k] = p;
          spent += p;
          bits += r;
          if (spent > cap2[k] + kSlack || bits > b1[k] + kSlack) {
            ok = false;
            break;
          }
        }
        s = e + 1;
      }
      if (ok && bits > best.bits) {
        best.bits = bits;
        best.p2 = power;
      }
    }
  }
  return best;
}

struct RelaySearch {
  std::size_t t;
  std::vector<double> c1, c2;
  double alpha;
  std::vector<Box> dbox, pbox;
  std::vector<std::array<double, 9>> dval, pval, rtab;
  std::vector<double> suf_rate_hi, suf_d_hi;  // size t+1
  double best = -1.0;
  std::vector<double> best_d, best_p1, best_p2;
  long long cells = 0;
  std::vector<double> cur_d, cur_p1, b1cum;

  void try_leaf(double dsum, double bsum) {
    ++cells;
    const double flat =
        static_cast<double>(t) *
        rate_of_power((c2.back() + alpha * dsum) / static_cast<double>(t));
    if (std::min(bsum, flat) < best - 1e-12) return;
    std::vector<double> cap2(t);
    double dc = 0.0;
    for (std::size_t k = 0; k < t; ++k) {
      dc += cur_d[k];
      cap2[k] = c2[k] + alpha * dc;
    }
    RelayInner inner = relay_forward_exact(b1cum, cap2);
    if (inner.bits < 0.0) return;
    if (inner.bits > best + kTie) {
      best = inner.bits;
      best_d = cur_d;
      best_p1 = cur_p1;
      best_p2 = inner.p2;
    } else if (inner.bits >= best - kTie) {
      std::vector<double> cand = cur_d;
      cand.insert(cand.end(), cur_p1.begin(), cur_p1.end());
      std::vector<double> inc = best_d;
      inc.insert(inc.end(), best_p1.begin(), best_p1.end());
      if (lex_less(cand, inc)) {
        best = std::max(best, inner.bits);
        best_d = cur_d;
        best_p1 = cur_p1;
        best_p2 = inner.p2;
      }
    }
  }

  void dfs(std::size_t i, double q1, double dsum, double bsum) {
    if (i == t) {
      try_leaf(dsum, bsum);
      return;
    }
    for (int jd = 0; jd < 9; ++jd) {
      const double dv = dval[i][jd];
      const double dsum2 = dsum + dv;
      if (q1 + dsum2 > c1[i] + kSlack) break;  // dv ascending
      for (int jp = 0; jp < 9; ++jp) {
        const double pv = pval[i][jp];
        const double q1b = q1 + pv;
        if (q1b + dsum2 > c1[i] + kSlack) break;  // pv ascending
        const double bsum2 = bsum + rtab[i][jp];
        const double erest = std::max(0.0, c1.back() - q1b - dsum2);
        const double m = static_cast<double>(t - i - 1);
        double ub1 = bsum2 + suf_rate_hi[i + 1];
        if (m > 0.0) {
          ub1 = std::min(ub1, bsum2 + m * rate_of_power(erest / m));
        }
        const double dmax = dsum2 + std::min(suf_d_hi[i + 1], erest);
        const double ub2 =
            static_cast<double>(t) *
            rate_of_power((c2.back() + alpha * dmax) / static_cast<double>(t));
        if (std::min(ub1, ub2) < best - 1e-12) continue;
        cur_d[i] = dv;
        cur_p1[i] = pv;
        b1cum[i] = bsum2;
        dfs(i + 1, q1b, dsum2, bsum2);
      }
    }
  }
};

OracleResult oracle_relay(const Scenario& s, int depth) {
  const std::vector<double> c1 = lin_cumsum(s.e1_snr().amounts);
  const std::vector<double> c2 = lin_cumsum(s.e2_snr().amounts);
  const std::size_t t = c1.size();
  RelaySearch rs;
  rs.t = t;
  rs.c1 = c1;
  rs.c2 = c2;
  rs.alpha = s.alpha;
  rs.dbox.resize(t);
  rs.pbox.resize(t);
  for (std::size_t i = 0; i < t; ++i) {
    rs.dbox[i] = {0.0, c1[i], 0.0, c1[i]};
    rs.pbox[i] = {0.0, c1[i], 0.0, c1[i]};
  }
  rs.dval.resize(t);
  rs.pval.resize(t);
  rs.rtab.resize(t);
  rs.suf_rate_hi.assign(t + 1, 0.0);
  rs.suf_d_hi.assign(t + 1, 0.0);
  rs.cur_d.assign(t, 0.0);
  rs.cur_p1.assign(t, 0.0);
  rs.b1cum.assign(t, 0.0);

  // Warm incumbent: no transfer, source at its exact single-user optimum.
  {
    EnumBest warm = enum_best(c1);
    std::vector<double> b1(t);
    double acc = 0.0;
    for (std::size_t k = 0; k < t; ++k) {
      acc += rate_of_power(warm.power[k]);
      b1[k] = acc;
    }
    RelayInner inner = relay_forward_exact(b1, c2);
    if (inner.bits >= 0.0) {
      rs.best = inner.bits;
      rs.best_d.assign(t, 0.0);
      rs.best_p1 = warm.power;
      rs.best_p2 = inner.p2;
    }
  }

  for (int round = 0; round < depth; ++round) {
    for (std::size_t i = 0; i < t; ++i) {
      for (int j = 0; j < 9; ++j) {
        rs.dval[i][j] = rs.dbox[i].value(j);
        rs.pval[i][j] = rs.pbox[i].value(j);
        rs.rtab[i][j] = rate_of_power(rs.pval[i][j]);
      }
    }
    for (std::size_t i = t; i-- > 0;) {
      rs.suf_rate_hi[i] = rs.suf_rate_hi[i + 1] + rate_of_power(rs.pbox[i].hi);
      rs.suf_d_hi[i] = rs.suf_d_hi[i + 1] + rs.dbox[i].hi;
    }
    rs.dfs(0, 0.0, 0.0, 0.0);
    for (std::size_t i = 0; i < t; ++i) {
      rs.dbox[i].shrink(rs.best_d.empty() ? 0.0 : rs.best_d[i]);
      rs.pbox[i].shrink(rs.best_p1.empty() ? 0.0 : rs.best_p1[i]);
    }
  }

  OracleResult out;
  out.best_objective = std::max(rs.best, 0.0);
  out.p1 = rs.best_p1;
  out.p2 = rs.best_p2;
  out.delta = rs.best_d;
  out.grid_levels = depth;
  out.cells_evaluated = rs.cells;
  return out;
}

// ---------------------------------------------------------------------------
// Two-way: grid over per-slot transfers, each side then solved exactly by
// enumeration on its adjusted caps.

OracleResult oracle_twoway(const Scenario& s, std::pair<double, double> theta,
                           int depth) {
  const std::vector<double> c1 = lin_cumsum(s.e1_snr().amounts);
  const std::vector<double> c2 = lin_cumsum(s.e2_snr().amounts);
  const std::size_t t = c1.size();
  const double alpha = s.alpha;
  std::vector<Box> box(t);
  for (std::size_t i = 0; i < t; ++i) box[i] = {0.0, c1[i], 0.0, c1[i]};

  OracleResult out;
  out.grid_levels = depth;
  double best = -1.0;
  std::vector<double> best_d, best_p1, best_p2;

  std::vector<double> d(t, 0.0), cap1(t), cap2(t);
  std::vector<int> idx(t, 0);
  for (int round = 0; round < depth; ++round) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      double dc = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i < t; ++i) {
        d[i] = box[i].value(idx[i]);
        dc += d[i];
        if (dc > c1[i] + kSlack) {
          ok = false;
          break;
        }
        cap1[i] = std::max(0.0, c1[i] - dc);
        cap2[i] = c2[i] + alpha * dc;
      }
      if (ok) {
        ++out.cells_evaluated;
        EnumBest u1 = enum_best(cap1);
        EnumBest u2 = enum_best(cap2);
        if (u1.bits >= 0.0 && u2.bits >= 0.0) {
          const double obj = theta.first * u1.bits + theta.second * u2.bits;
          if (obj > best + kTie ||
              (obj >= best - kTie && !best_d.empty() && lex_less(d, best_d))) {
            best = std::max(best, obj);
            best_d = d;
            best_p1 = u1.power;
            best_p2 = u2.power;
          }
        }
      }
      std::size_t k = 0;
      while (k < t && ++idx[k] == 9) {
        idx[k] = 0;
        ++k;
      }
      if (k == t) break;
    }
    for (std::size_t i = 0; i < t; ++i) {
      box[i].shrink(best_d.empty() ? 0.0 : best_d[i]);
    }
  }
  out.best_objective = std::max(best, 0.0);
  out.p1 = best_p1;
  out.p2 = best_p2;
  out.delta = best_d;
  return out;
}

// ---------------------------------------------------------------------------
// MAC: grid over transfers; inner weighted-corner problem solved by two-block
// coordinate ascent where each block is exact (tight-prefix enumeration with
// a water-level bisection; slot powers in closed form from the marginal
// condition a/(1+p) + b/(1+p+q) = nu).

std::vector<double> mac_block_exact(const std::vector<double>& caps,
                                    const std::vector<double>& q, double a,
                                    double b) {
  const std::size_t t = caps.size();
  std::vector<double> zero(t, 0.0);
  if (a + b <= 0.0) return zero;
  auto slot_power = [&](double nu, double qi) {
    const double A = nu * qi - a - b;
    const double x =
        (-A + std::sqrt(A * A + 4.0 * nu * a * qi)) / (2.0 * nu);
    return std::max(0.0, x - 1.0);
  };
  double best_gain = -std::numeric_limits<double>::infinity();
  std::vector<double> best_p = zero;
  std::vector<double> power(t, 0.0);
  const unsigned masks = 1u << (t - 1);
  for (unsigned mask = 0; mask < masks; ++mask) {
    double used = 0.0;
    bool ok = true;
    std::size_t s = 0;
    for (std::size_t e = 0; e < t && ok; ++e) {
      const bool boundary = e + 1 == t || (mask >> e) & 1u;
      if (!boundary) continue;
      const double budget = caps[e] - used;
      if (budget < -1e-12) {
        ok = false;
        break;
      }
      if (budget <= 0.0) {
        for (std::size_t k = s; k <= e; ++k) power[k] = 0.0;
      } else {
        double lo = 1e-14, hi = a + b;  // sum(p) decreasing in nu
        for (int it = 0; it < 80; ++it) {
          const double nu = 0.5 * (lo + hi);
          double tot = 0.0;
          for (std::size_t k = s; k <= e; ++k) tot += slot_power(nu, q[k]);
          (tot > budget ? lo : hi) = nu;
        }
        const double nu = 0.5 * (lo + hi);
        for (std::size_t k = s; k <= e; ++k) power[k] = slot_power(nu, q[k]);
      }
      for (std::size_t k = s; k <= e && ok; ++k) {
        used += power[k];
        if (used > caps[k] + kSlack) ok = false;
      }
      s = e + 1;
    }
    if (!ok) continue;
    double gain = 0.0;
    for (std::size_t k = 0; k < t; ++k) {
      gain += a * rate_of_power(power[k]) +
              b * rate_of_power(power[k] + q[k]);
    }
    if (gain > best_gain) {
      best_gain = gain;
      best_p = power;
    }
  }
  return best_p;
}

OracleResult oracle_mac(const Scenario& s, std::pair<double, double> theta,
                        int depth) {
  const std::vector<double> c1 = lin_cumsum(s.e1_snr().amounts);
  const std::vector<double> c2 = lin_cumsum(s.e2_snr().amounts);
  const std::size_t t = c1.size();
  const double alpha = s.alpha;
  const double th1 = theta.first, th2 = theta.second;
  const double c = 0.5 / kLn2;
  // Weighted corner objective in block form: user 1 sees a1/(1+p1) +
  // b1/(1+p1+p2), user 2 symmetrically.
  double a1, b1, a2, b2;
  if (th1 >= th2) {
    a1 = (th1 - th2) * c;
    b1 = th2 * c;
    a2 = 0.0;
    b2 = th2 * c;
  } else {
    a1 = 0.0;
    b1 = th1 * c;
    a2 = (th2 - th1) * c;
    b2 = th1 * c;
  }
  auto objective = [&](const std::vector<double>& p1,
                       const std::vector<double>& p2) {
    double v = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
      if (th1 >= th2) {
        v += (th1 - th2) * rate_of_power(p1[i]) +
             th2 * rate_of_power(p1[i] + p2[i]);
      } else {
        v += th1 * rate_of_power(p1[i] + p2[i]) +
             (th2 - th1) * rate_of_power(p2[i]);
      }
    }
    return v;
  };

  std::vector<Box> box(t);
  for (std::size_t i = 0; i < t; ++i) box[i] = {0.0, c1[i], 0.0, c1[i]};

  OracleResult out;
  out.grid_levels = depth;
  double best = -1.0;
  std::vector<double> best_d, best_p1, best_p2;

  std::vector<double> d(t, 0.0), cap1(t), cap2(t);
  std::vector<int> idx(t, 0);
  for (int round = 0; round < depth; ++round) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      double dc = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i < t; ++i) {
        d[i] = box[i].value(idx[i]);
        dc += d[i];
        if (dc > c1[i] + kSlack) {
          ok = false;
          break;
        }
        cap1[i] = std::max(0.0, c1[i] - dc);
        cap2[i] = c2[i] + alpha * dc;
      }
      if (ok) {
        ++out.cells_evaluated;
        std::vector<double> p1(t, 0.0), p2(t, 0.0);
        double cur = objective(p1, p2);
        for (int it = 0; it < 60; ++it) {
          p1 = mac_block_exact(cap1, p2, a1, b1);
          p2 = mac_block_exact(cap2, p1, a2, b2);
          const double next = objective(p1, p2);
          if (next - cur < 1e-12) {
            cur = next;
            break;
          }
          cur = next;
        }
        if (cur > best + kTie ||
            (cur >= best - kTie && !best_d.empty() && lex_less(d, best_d))) {
          best = std::max(best, cur);
          best_d = d;
          best_p1 = p1;
          best_p2 = p2;
        }
      }
      std::size_t k = 0;
      while (k < t && ++idx[k] == 9) {
        idx[k] = 0;
        ++k;
      }
      if (k == t) break;
    }
    for (std::size_t i = 0; i < t; ++i) {
      box[i].shrink(best_d.empty() ? 0.0 : best_d[i]);
    }
  }
  out.best_objective = std::max(best, 0.0);
  out.p1 = best_p1;
  out.p2 = best_p2;
  out.delta = best_d;
  return out;
}

}  // namespace

OracleResult brute_force_solve(const Scenario& s,
                               std::pair<double, double> theta, int depth) {
  Scenario sc = s;
  sc.validate();
  if (sc.e1.amounts.size() > 4) {
    throw std::invalid_argument("brute force is sized for horizons up to 4");
  }
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  switch (sc.model) {
    case Model::Relay:
      return oracle_relay(sc, depth);
    case Model::TwoWay:
      return oracle_twoway(sc, theta, depth);
    case Model::Mac:
      return oracle_mac(sc, theta, depth);
  }
  throw std::logic_error("unknown model");
}

Scenario random_scenario(unsigned seed, std::size_t t, double max_energy,
                         Model model) {
  if (t < 1) throw std::invalid_argument("horizon must be at least 1");
  if (!(max_energy > 0.0)) {
    throw std::invalid_argument("max_energy must be positive");
  }
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ue(0.0, max_energy);
  std::uniform_real_distribution<double> ua(0.1, 1.0);
  Scenario s;
  s.model = model;
  s.e1.amounts.resize(t);
  s.e2.amounts.resize(t);
  for (double& x : s.e1.amounts) x = ue(rng);
  for (double& x : s.e2.amounts) x = ue(rng);
  s.alpha = ua(rng);
  return s;
}

CompareVerdict compare_reports(double solver_obj, double oracle_obj,
                               double rel_tol) {
  CompareVerdict v;
  v.relative_gap =
      (oracle_obj - solver_obj) / std::max(std::abs(oracle_obj), 1e-12);
  v.pass = v.relative_gap <= rel_tol;
  return v;
}

BatchOutcome verify_batch(unsigned seed, int count, Model model, int depth,
                          double rel_tol) {
  if (count < 1) throw std::invalid_argument("count must be at least 1");
  BatchOutcome out;
  out.worst_gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    const unsigned inst_seed = seed + static_cast<unsigned>(i);
    const std::size_t t = 2 + (i % 2);
    Scenario s = random_scenario(inst_seed, t, 10.0, model);
    std::pair<double, double> theta{1.0, 1.0};
    if (model != Model::Relay) {
      std::mt19937 trng(inst_seed + 1000003u);
      std::uniform_real_distribution<double> uw(0.05, 1.0);
      theta.first = uw(trng);
      theta.second = uw(trng);
    }
    ++out.instances;
    std::vector<std::string> why;
    try {
      PowerSchedule p1, p2;
      TransferSchedule dl;
      double objective = 0.0;
      KktReport kkt;
      if (model == Model::Relay) {
        RelayReport rep = solve_relay(s);
        p1 = rep.p_source;
        p2 = rep.p_relay;
        dl = rep.delta;
        objective = rep.throughput;
        kkt = rep.kkt;
        for (const auto& lr : rep.lemma_results) {
          if (!lr.pass) why.push_back("lemma failed: " + lr.name);
        }
        if (!data_causality_violations(p1, p2).empty()) {
          why.push_back("relay forwarded bits it never received");
        }
      } else if (model == Model::TwoWay) {
        SolveReport rep = solve_twoway_weighted(s, theta);
        p1 = rep.p1;
        p2 = rep.p2;
        dl = rep.delta;
        objective = rep.objective;
        kkt = rep.kkt;
        RatioCheck rc = verify_transfer_ratio(rep, theta, s.alpha);
        if (!rc.pass) why.push_back("transfer ratio violated");
      } else {
        MacReport rep = solve_mac_weighted(s, theta);
        p1 = rep.p1;
        p2 = rep.p2;
        dl = rep.delta;
        objective = rep.objective;
        kkt = rep.kkt;
        const double dtot = dl.total();
        if (theta.first >= theta.second && dtot > 1e-9) {
          why.push_back("transfer used where user 1 outweighs user 2");
        }
        double e1tot = 0.0;
        for (double x : s.e1.amounts) e1tot += x;
        if (theta.second * s.alpha >= theta.first &&
            theta.first < theta.second && std::abs(dtot - e1tot) > 1e-9) {
          why.push_back("full-transfer regime kept energy back");
        }
      }
      OracleResult oracle = brute_force_solve(s, theta, depth);
      CompareVerdict verdict =
          compare_reports(objective, oracle.best_objective, rel_tol);
      out.worst_gap = std::max(out.worst_gap, verdict.relative_gap);
      if (!verdict.pass) {
        why.push_back("objective fell below the grid baseline");
      }
      if (!feasibility_violations(s, p1, p2, dl).empty()) {
        why.push_back("solver point infeasible");
      }
      if (!kkt.within(tol::kkt)) {
        why.push_back("first-order residuals too large");
      }
      // Convexity spot check: the average of two feasible points stays
      // feasible.
      {
        PowerSchedule m1 = p1, m2 = p2;
        TransferSchedule md = dl;
        for (std::size_t k = 0; k < m1.slots(); ++k) {
          m1.power[k] = 0.5 * (m1.power[k] + oracle.p1[k]);
          m2.power[k] = 0.5 * (m2.power[k] + oracle.p2[k]);
          md.delta[k] = 0.5 * (md.delta[k] + oracle.delta[k]);
        }
        if (!feasibility_violations(s, m1, m2, md).empty()) {
          why.push_back("midpoint with the oracle point left the polytope");
        }
      }
    } catch (const std::exception& ex) {
      why.push_back(std::string("exception: ") + ex.what());
    }
    if (why.empty()) {
      ++out.passes;
    } else {
      ++out.failures;
      std::ostringstream note;
      note << "instance " << i << " (seed " << inst_seed << "): " << why[0];
      out.failure_notes.push_back(note.str());
    }
  }
  if (!std::isfinite(out.worst_gap)) out.worst_gap = 0.0;
  return out;
}

}  // namespace ecoop
